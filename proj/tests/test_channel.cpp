#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "aoid2d/channel.hpp"
#include "aoid2d/config.hpp"
#include "aoid2d/simulator.hpp"

using namespace aoid2d;

namespace {

constexpr double kSincTwoThirds = 0.413496671566344;

SimConfig oracle_config(const NetworkParams& p, std::uint64_t seed) {
  SimConfig c;
  c.params = p;
  c.master_seed = seed;
  return c;
}

}  // namespace

TEST(Sinr, NoiselessWithoutInterferersIsInfinite) {
  EXPECT_TRUE(std::isinf(sinr(1.0, 10.0, 1.0, {}, 0.0, 3.0)));
}

TEST(Sinr, DirectSubstitution) {
  EXPECT_NEAR(sinr(0.1, 100.0, 1.0, {}, 1e-12, 3.0), 1e5, 1e-6);
}

TEST(Sinr, AnyInterfererLowersIt) {
  std::vector<Interferer> is;
  double prev = sinr(0.1, 100.0, 0.7, is, 1e-12, 3.0);
  for (double d : {500.0, 80.0, 1000.0, 30.0}) {
    is.push_back({1e-5, d, 0.3});
    const double v = sinr(0.1, 100.0, 0.7, is, 1e-12, 3.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(PathGain, CubeFastPathAgreesWithPow) {
  for (double d2 : {1.0, 2.5, 1e4, 3.3e7}) {
    EXPECT_NEAR(path_gain_sq(d2, 3.0), std::pow(d2, -1.5), 1e-14 * std::pow(d2, -1.5));
  }
}

TEST(DecodeA0, NoiseOnlyWithoutInterferers) {
  NetworkParams p = table1();
  p.lambda_A = 0.0;
  EXPECT_DOUBLE_EQ(decode_prob_a0(p), std::exp(-p.beta * p.sigma2 * std::pow(p.d_A, p.alpha) / p.P2));
}

TEST(DecodeA0, VanishingAccess) {
  NetworkParams p = table1();
  p.p1 = 1e-12;
  EXPECT_NEAR(decode_prob_a0(p), std::exp(-0.0125), 1e-9);
  EXPECT_NEAR(decode_prob_a0(p), 0.98758, 1e-5);
}

TEST(DecodeA0, SubstitutionAtPointTwo) {
  NetworkParams p = table1();
  p.p1 = 0.2;
  const double expected = std::exp(-0.0125) * std::exp(-std::numbers::pi * 0.2 * 2e-4 * 2500 / kSincTwoThirds);
  EXPECT_NEAR(decode_prob_a0(p), expected, 1e-12);
}

TEST(DecodeD1, ReducesToD0WithoutInterference) {
  NetworkParams p = table1();
  p.p2 = 0.0;
  EXPECT_DOUBLE_EQ(decode_prob_d1(p), decode_prob_d0(p));
  p.p2 = 0.5;
  p.P2 = 1e-30;
  EXPECT_NEAR(decode_prob_d1(p), decode_prob_d0(p), 1e-12);
}

TEST(DecodeA1, ReducesToA0AtAccessP2) {
  NetworkParams p = table1();
  p.P1 = 1e-30;
  NetworkParams q = p;
  q.p1 = p.p2;
  EXPECT_NEAR(decode_prob_a1(p, 216.55), decode_prob_a0(q), 1e-12);
  p = table1();
  q = p;
  q.p1 = p.p2;
  EXPECT_NEAR(decode_prob_a1(p, 1e30), decode_prob_a0(q), 1e-12);
}

TEST(DecodeD0, Limits) {
  NetworkParams p = table1();
  EXPECT_NEAR(decode_prob_d0(p), std::exp(-1e-5), 1e-15);
  EXPECT_NEAR(decode_prob_d0(p), 0.99999, 1e-8);
  p.sigma2 = 0.0;
  EXPECT_DOUBLE_EQ(decode_prob_d0(p), 1.0);
  p = table1();
  p.P1 = 1e300;
  EXPECT_DOUBLE_EQ(decode_prob_d0(p), 1.0);
}

TEST(DecodeProbs, RangesAndOrdering) {
  const double e = expected_distance_to_tagged(table1());
  for (double p1 : {0.05, 0.3, 0.9}) {
    for (double p2 : {0.0, 0.05, 0.4, 1.0}) {
      for (double P2 : {1e-7, 1e-5, 2e-5}) {
        NetworkParams p = table1();
        p.p1 = p1;
        p.p2 = p2;
        p.P2 = P2;
        const DecodeProbs d = decode_probs(p, e);
        for (double v : {d.p_A0, d.p_D1, d.p_A1, d.p_D0}) {
          EXPECT_GE(v, 0.0);
          EXPECT_LE(v, 1.0);
        }
        if (p2 > 0.0) {
          EXPECT_GT(d.p_D0, d.p_D1);
        } else {
          EXPECT_DOUBLE_EQ(d.p_D0, d.p_D1);
        }
      }
    }
  }
}

TEST(DecodeProbs, Monotonicity) {
  const double e = expected_distance_to_tagged(table1());
  NetworkParams p = table1();
  DecodeProbs prev = decode_probs(p, e);
  for (int k = 1; k <= 50; ++k) {
    p.p1 = 0.02 * k;
    p.p2 = 0.02 * k;
    const DecodeProbs d = decode_probs(p, e);
    if (k > 1) {
      EXPECT_LT(d.p_A0, prev.p_A0);
      EXPECT_LT(d.p_D1, prev.p_D1);
      EXPECT_LT(d.p_A1, prev.p_A1);
      EXPECT_DOUBLE_EQ(d.p_D0, prev.p_D0);
    }
    prev = d;
  }
}

// Monte-Carlo decode oracle (shorter than the acceptance run).

TEST(DecodeOracle, HighRegimeMatchesNoiseOnly) {
  const NetworkParams p = table1();
  const DecodeEstimate e = estimate_decode_probs(oracle_config(p, 21), QueueRegime::high, 200'000);
  ASSERT_TRUE(e.p_D0);
  EXPECT_FALSE(e.p_A0 || e.p_A1 || e.p_D1);
  const double se = std::max(e.p_D0->std_error, std::sqrt(decode_prob_d0(p) * (1 - decode_prob_d0(p)) / 2e5));
  EXPECT_LE(std::fabs(e.p_D0->value - decode_prob_d0(p)), 3.0 * se + 1.0 / 2e5);
}

TEST(DecodeOracle, EmptyRegimeWithoutInterferers) {
  NetworkParams p = table1();
  p.lambda_A = 0.0;
  p.P2 = 2e-6;  // noise-only success near 0.94 so the check has power
  const DecodeEstimate e = estimate_decode_probs(oracle_config(p, 22), QueueRegime::empty, 200'000);
  ASSERT_TRUE(e.p_A0);
  const double expected = std::exp(-p.beta * p.sigma2 * std::pow(p.d_A, p.alpha) / p.P2);
  EXPECT_LT(std::fabs(e.p_A0->value - expected), 3.0 * e.p_A0->std_error);
}

TEST(DecodeOracle, EmptyRegimeMatchesClosedForm) {
  NetworkParams p = table1();
  p.p1 = 0.2;
  const DecodeEstimate e = estimate_decode_probs(oracle_config(p, 23), QueueRegime::empty, 200'000);
  EXPECT_LT(std::fabs(e.p_A0->value - decode_prob_a0(p)), 3.0 * e.p_A0->std_error)
      << e.p_A0->value << " vs " << decode_prob_a0(p);
}

TEST(DecodeOracle, MidRegimeTdMatchesClosedForm) {
  NetworkParams p = table1();
  p.p2 = 0.3;
  const DecodeEstimate e = estimate_decode_probs(oracle_config(p, 24), QueueRegime::mid, 200'000);
  ASSERT_TRUE(e.p_D1 && e.p_A1);
  EXPECT_LT(std::fabs(e.p_D1->value - decode_prob_d1(p)), 3.0 * e.p_D1->std_error + 1.0 / 2e5)
      << e.p_D1->value << " vs " << decode_prob_d1(p);
}

TEST(DecodeOracle, IsDeterministicAcrossWorkers) {
  SimConfig c = oracle_config(table1(), 25);
  c.workers = 1;
  const auto a = estimate_decode_probs(c, QueueRegime::mid, 150'000);
  c.workers = 3;
  const auto b = estimate_decode_probs(c, QueueRegime::mid, 150'000);
  EXPECT_EQ(a.p_A1->successes, b.p_A1->successes);
  EXPECT_EQ(a.p_D1->successes, b.p_D1->successes);
}

TEST(DecodeOracle, RejectsTooFewTrials) {
  EXPECT_THROW(estimate_decode_probs(oracle_config(table1(), 1), QueueRegime::high, 9'999), ConfigError);
}
