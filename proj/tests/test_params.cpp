#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "aoid2d/config.hpp"

using namespace aoid2d;

namespace {

Json table1_doc() {
  return Json{{"lambda_A", 2e-4}, {"d_D", 100},    {"d_A", 50},   {"R", 300},       {"alpha", 3},
              {"beta", 0},        {"sigma2", -90}, {"P1", 100},   {"P_max", 0.02},  {"D_max", 5},
              {"lambda_D", 0.2},  {"M", 3},        {"p2", 0.2},   {"P2", 0.01}};
}

std::string error_key(const Json& doc) {
  try {
    from_config(doc);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

}  // namespace

TEST(Units, ZeroDbIsUnity) { EXPECT_DOUBLE_EQ(db_to_linear(0.0), 1.0); }

TEST(Units, MinusNinetyDbmIsOnePicowatt) { EXPECT_NEAR(dbm_to_watts(-90.0), 1e-12, 1e-24); }

TEST(Units, RoundTrips) {
  for (double x : {-90.0, -3.0, 0.0, 7.5, 30.0}) {
    EXPECT_NEAR(linear_to_db(db_to_linear(x)), x, 1e-12);
    EXPECT_NEAR(watts_to_dbm(dbm_to_watts(x)), x, 1e-12);
  }
  EXPECT_DOUBLE_EQ(watts_to_mw(mw_to_watts(0.02)), 0.02);
}

TEST(Sinc, KnownValues) {
  EXPECT_DOUBLE_EQ(sinc(0.0), 1.0);
  EXPECT_NEAR(sinc(2.0 / 3.0), 0.413496671566344, 1e-12);
  EXPECT_NEAR(sinc(1.0), 0.0, 1e-16);
}

TEST(FromConfig, BetaZeroDb) {
  Json doc = table1_doc();
  doc["beta"] = 0;
  EXPECT_DOUBLE_EQ(from_config(doc).beta, 1.0);
}

TEST(FromConfig, SigmaMinusNinetyDbm) { EXPECT_NEAR(from_config(table1_doc()).sigma2, 1e-12, 1e-24); }

TEST(FromConfig, TableOneDocument) {
  const NetworkParams p = from_config(table1_doc());
  EXPECT_DOUBLE_EQ(p.lambda_A, 2e-4);
  EXPECT_DOUBLE_EQ(p.d_D, 100.0);
  EXPECT_DOUBLE_EQ(p.d_A, 50.0);
  EXPECT_DOUBLE_EQ(p.R, 300.0);
  EXPECT_DOUBLE_EQ(p.alpha, 3.0);
  EXPECT_DOUBLE_EQ(p.P1, 0.1);
  EXPECT_DOUBLE_EQ(p.P_max, 2e-5);
  EXPECT_DOUBLE_EQ(p.P2, 1e-5);
  EXPECT_DOUBLE_EQ(p.D_max, 5.0);
  EXPECT_EQ(p.M, 3);
  EXPECT_DOUBLE_EQ(p.d_D0, p.d_D);
  EXPECT_NEAR(p.p1, 0.26324, 1e-5);
}

TEST(FromConfig, DefaultsComeFromTableOne) {
  const Json doc{{"lambda_D", 0.2}, {"M", 3}, {"p2", 0.2}, {"P2", 0.01}};
  EXPECT_EQ(from_config(doc), from_config(table1_doc()));
}

TEST(FromConfig, DdZeroFollowsDdWhenAbsent) {
  Json doc = table1_doc();
  doc["d_D"] = 80;
  EXPECT_DOUBLE_EQ(from_config(doc).d_D0, 80.0);
  doc["d_D0"] = 120;
  EXPECT_DOUBLE_EQ(from_config(doc).d_D0, 120.0);
}

TEST(FromConfig, MissingKeyIsNamed) {
  for (const char* key : {"lambda_D", "M", "p2", "P2"}) {
    Json doc = table1_doc();
    doc.erase(key);
    EXPECT_EQ(error_key(doc), key);
  }
}

TEST(FromConfig, UnknownKeyRejected) {
  Json doc = table1_doc();
  doc["lamda_D"] = 0.3;
  EXPECT_EQ(error_key(doc), "lamda_D");
}

TEST(FromConfig, NonPositiveValuesRejected) {
  for (const char* key : {"lambda_A", "d_D", "d_A", "R", "P1", "P2", "P_max", "D_max"}) {
    Json doc = table1_doc();
    doc[key] = 0.0;
    EXPECT_EQ(error_key(doc), key) << key;
    doc[key] = -1.0;
    EXPECT_EQ(error_key(doc), key) << key;
  }
}

TEST(FromConfig, LambdaDOutsideUnitIntervalRejected) {
  for (double v : {0.0, 1.0, 1.5, -0.1}) {
    Json doc = table1_doc();
    doc["lambda_D"] = v;
    EXPECT_EQ(error_key(doc), "lambda_D") << v;
  }
}

TEST(FromConfig, ParseFailuresNameTheKey) {
  Json doc = table1_doc();
  doc["R"] = "three hundred";
  EXPECT_EQ(error_key(doc), "R");
  doc = table1_doc();
  doc["M"] = 2.5;
  EXPECT_EQ(error_key(doc), "M");
  doc = table1_doc();
  doc["alpha"] = 2.0;
  EXPECT_EQ(error_key(doc), "alpha");
  EXPECT_EQ(error_key(Json::array()), "<document>");
}

TEST(FromConfig, RoundTripIsExactToTwelveDigits) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    NetworkParams p;
    p.lambda_A = 1e-5 + 1e-3 * u(g);
    p.lambda_D = 0.01 + 0.98 * u(g);
    p.d_D = 10 + 200 * u(g);
    p.d_A = 5 + 100 * u(g);
    p.d_D0 = 300 * u(g);
    p.R = 50 + 500 * u(g);
    p.alpha = 2.1 + 3 * u(g);
    p.beta = 0.1 + 10 * u(g);
    p.sigma2 = 1e-14 * (1 + 1000 * u(g));
    p.P1 = 1e-3 + u(g);
    p.P2 = 1e-6 + 1e-4 * u(g);
    p.P_max = 1e-5 + 1e-4 * u(g);
    p.p1 = 0.01 + 0.99 * u(g);
    p.p2 = 0.01 + 0.99 * u(g);
    p.M = 1 + static_cast<int>(10 * u(g));
    p.D_max = 1 + 20 * u(g);
    const NetworkParams q = from_config(to_config(p));
    EXPECT_EQ(q.M, p.M);
    for (const auto& k : kConfigKeys) {
      if (k.name == "M") continue;
      NetworkParams pc = p, qc = q;
      const double a = *detail::field_of(pc, k.name);
      const double b = *detail::field_of(qc, k.name);
      EXPECT_NEAR(b, a, 1e-12 * std::fabs(a)) << k.name;
    }
  }
}

TEST(EnvOverride, ReplacesKey) {
  setenv("AOID2D_lambda_D", "0.35", 1);
  setenv("AOID2D_P2", "0.015", 1);
  const Json doc = apply_env_overrides(table1_doc());
  unsetenv("AOID2D_lambda_D");
  unsetenv("AOID2D_P2");
  const NetworkParams p = from_config(doc);
  EXPECT_DOUBLE_EQ(p.lambda_D, 0.35);
  EXPECT_DOUBLE_EQ(p.P2, 1.5e-5);
}

TEST(EnvOverride, GarbageIsAConfigError) {
  setenv("AOID2D_R", "abc", 1);
  EXPECT_THROW(apply_env_overrides(table1_doc()), ConfigError);
  unsetenv("AOID2D_R");
}

TEST(Validate, TableOneIsClean) {
  const ValidationReport r = validate(table1());
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_GT(decode_prob_d0(table1()), 0.99);
}

TEST(Validate, InstabilityIsAViolation) {
  NetworkParams p = table1();
  p.sigma2 = -std::log(0.99) * p.P1 / std::pow(p.d_D, p.alpha);  // p_D0 = 0.99
  p.lambda_D = 0.999;
  ASSERT_NEAR(decode_prob_d0(p), 0.99, 1e-12);
  const ValidationReport r = validate(p);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_NE(r.violations[0].find("lambda_D < p_D0"), std::string::npos);
}

TEST(Validate, AccessOrderIsOnlyAWarning) {
  NetworkParams p = table1();
  p.p1 = 0.1;
  p.p2 = 0.3;
  const ValidationReport r = validate(p);
  EXPECT_TRUE(r.ok());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("p2 >= p1"), std::string::npos);
}

TEST(Validate, IsPure) {
  NetworkParams p = table1();
  p.lambda_D = 1.2;
  p.p2 = 0.9;
  const ValidationReport a = validate(p);
  const ValidationReport b = validate(p);
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_EQ(a.warnings, b.warnings);
}
