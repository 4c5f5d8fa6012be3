#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "aoid2d/errors.hpp"

namespace aoid2d {

// Queue of the T_D transmitter, observed at slot boundaries. In each slot the
// head-of-line packet (if any) is served with probability p_D1 while
// 1 <= Q <= M and p_D0 while Q > M; independently one packet arrives with
// probability lambda_D. A packet arriving to an empty queue is first served in
// the following slot. This is a birth-death chain with
//   up(n)   = lambda_D (1 - s(n)),   s(0) = 0
//   down(n) = (1 - lambda_D) s(n).

enum class QueueBranch {
  generic,          // lambda_D != p_D1
  lhopital,         // lambda_D == p_D1 (psi == 1)
  truncated_chain,  // numerical solve of the truncated chain
};

struct QueueDistribution {
  double pi0 = 1.0;      // Pr(Q = 0)
  double pr_mid = 0.0;   // Pr(1 <= Q <= M)
  double pr_high = 0.0;  // Pr(Q > M)
  double q_avg = 0.0;    // E[Q]
  double psi = 0.0;      // lambda_D (1 - p_D1) / ((1 - lambda_D) p_D1)
  QueueBranch branch = QueueBranch::generic;
};

inline const char* to_string(QueueBranch b) {
  switch (b) {
    case QueueBranch::generic: return "generic";
    case QueueBranch::lhopital: return "lhopital";
    case QueueBranch::truncated_chain: return "truncated_chain";
  }
  return "?";
}

/// |lambda_D - p_D1| below this uses the L'Hopital form of pi0.
inline constexpr double kLhopitalSwitch = 1e-9;

namespace detail {

inline void check_queue_inputs(double lambda_D, double p_d1, double p_d0, int M) {
  if (!(lambda_D >= 0.0 && lambda_D < 1.0)) throw ModelError("lambda_D must lie in [0, 1)");
  if (!(p_d0 > 0.0 && p_d0 <= 1.0)) throw ModelError("p_D0 must lie in (0, 1]");
  if (!(p_d1 >= 0.0 && p_d1 <= p_d0)) throw ModelError("p_D1 must lie in [0, p_D0]");
  if (M < 1) throw ModelError("backlog threshold M must be >= 1");
  if (!(lambda_D < p_d0)) {
    throw ModelError("unstable queue: stability requires lambda_D < p_D0 (lambda_D = " + std::to_string(lambda_D) +
                     ", p_D0 = " + std::to_string(p_d0) + ")");
  }
  if (p_d1 == 0.0 && lambda_D > 0.0) {
    throw ModelError("degenerate service: p_D1 = 0 with lambda_D > 0 cannot pass through states 1..M");
  }
}

}  // namespace detail

/// Closed-form stationary distribution of the T_D queue.
///
/// Generic branch: pi0 = (p1 - l)(p0 - l) / (p1 p0 - l p1 - l psi^M (p0 - p1)),
/// Pr(1<=Q<=M) = l (1 - psi^M)(p0 - l) / den, Pr(Q>M) = l psi^M (p1 - l) / den,
/// E[Q] = (Q1 + Q2) / den with
///   Q1 = l (1 - l) p1 (p0 - l)/(p1 - l) (M psi^(M+1) - (M+1) psi^M + 1),
///   Q2 = psi^M l (p1 - l) (M + p0 (1 - l)/(p0 - l)).
/// Evaluated in long double since the numerator and denominator of pi0 both
/// vanish as lambda_D approaches p_D1.
inline QueueDistribution stationary(double lambda_D, double p_d1, double p_d0, int M) {
  detail::check_queue_inputs(lambda_D, p_d1, p_d0, M);
  QueueDistribution out;
  if (lambda_D == 0.0) return out;

  using R = long double;
  const R l = lambda_D;
  const R p1 = p_d1;
  const R p0 = p_d0;
  const R m = M;
  const R psi = l * (1 - p1) / ((1 - l) * p1);
  out.psi = static_cast<double>(psi);

  if (std::fabs(lambda_D - p_d1) < kLhopitalSwitch) {
    // psi == 1: the states 1..M carry equal mass pi0 / (1 - p1).
    out.branch = QueueBranch::lhopital;
    const R pi0 = (p0 - p1) / (p1 + (p0 - p1) * (m + 1 - p1) / (1 - p1));
    const R mid = pi0 * m / (1 - p1);
    const R high = pi0 * p1 / (p0 - p1);
    const R r1 = pi0 * m * (m + 1) / (2 * (1 - p1));
    const R r3 = pi0 * p1 * (1 - p1) * p0 / ((p0 - p1) * (p0 - p1));
    out.pi0 = static_cast<double>(pi0);
    out.pr_mid = static_cast<double>(mid);
    out.pr_high = static_cast<double>(high);
    out.q_avg = static_cast<double>(r1 + m * high + r3);
    return out;
  }

  const R psiM = std::pow(psi, m);
  const R den = p1 * p0 - l * p1 - l * psiM * (p0 - p1);
  const R pi0 = (p1 - l) * (p0 - l) / den;
  const R mid = l * (1 - psiM) * (p0 - l) / den;
  const R high = l * psiM * (p1 - l) / den;
  // sum_{n=1}^M n psi^(n-1) = (M psi^(M+1) - (M+1) psi^M + 1) / (1 - psi)^2
  const R poly = m * psiM * psi - (m + 1) * psiM + 1;
  const R q1 = l * (1 - l) * p1 * (p0 - l) / (p1 - l) * poly;
  const R q2 = psiM * l * (p1 - l) * (m + p0 * (1 - l) / (p0 - l));
  out.pi0 = static_cast<double>(pi0);
  out.pr_mid = static_cast<double>(mid);
  out.pr_high = static_cast<double>(high);
  out.q_avg = static_cast<double>((q1 + q2) / den);
  return out;
}

/// Stationary probability of n packets given pi0.
inline double pi_n(std::size_t n, double lambda_D, double p_d1, double p_d0, int M, double pi0) {
  detail::check_queue_inputs(lambda_D, p_d1, p_d0, M);
  if (n == 0) return pi0;
  if (lambda_D == 0.0) return 0.0;
  const double l = lambda_D;
  const double nn = static_cast<double>(n);
  if (n <= static_cast<std::size_t>(M)) {
    return std::pow(l, nn) * std::pow(1.0 - p_d1, nn - 1.0) / (std::pow(p_d1, nn) * std::pow(1.0 - l, nn)) * pi0;
  }
  const double mm = M;
  return std::pow(l, nn) * std::pow(1.0 - p_d1, mm) * std::pow(1.0 - p_d0, nn - mm - 1.0) /
         (std::pow(p_d1, mm) * std::pow(p_d0, nn - mm) * std::pow(1.0 - l, nn)) * pi0;
}

/// Geometric decay ratio of pi_n above the threshold.
inline double tail_ratio(double lambda_D, double p_d0) {
  return lambda_D * (1.0 - p_d0) / ((1.0 - lambda_D) * p_d0);
}

/// Smallest N >= M + 10 whose index-weighted tail beyond N is below 1e-13.
inline std::size_t default_truncation(double lambda_D, double p_d0, int M) {
  const double r = tail_ratio(lambda_D, p_d0);
  std::size_t n = static_cast<std::size_t>(M) + 10;
  if (r <= 0.0) return n;
  double tail = std::pow(r, static_cast<double>(n - static_cast<std::size_t>(M)));
  while (tail * static_cast<double>(n + 1) / (1.0 - r) >= 1e-13) {
    tail *= r;
    ++n;
  }
  return n;
}

/// Stationary distribution of the chain truncated to states 0..N (upward
/// moves out of N are suppressed), solved as a sparse linear system.
inline QueueDistribution stationary_oracle(double lambda_D, double p_d1, double p_d0, int M, std::size_t N) {
  detail::check_queue_inputs(lambda_D, p_d1, p_d0, M);
  QueueDistribution out;
  out.branch = QueueBranch::truncated_chain;
  if (lambda_D == 0.0) return out;
  out.psi = lambda_D * (1.0 - p_d1) / ((1.0 - lambda_D) * p_d1);
  if (N <= static_cast<std::size_t>(M)) throw ModelError("truncation must exceed M");

  const double l = lambda_D;
  auto service = [&](std::size_t n) {
    if (n == 0) return 0.0;
    return n <= static_cast<std::size_t>(M) ? p_d1 : p_d0;
  };
  auto up = [&](std::size_t n) { return n < N ? l * (1.0 - service(n)) : 0.0; };
  auto down = [&](std::size_t n) { return n > 0 ? (1.0 - l) * service(n) : 0.0; };

  // Rows of (P^T - I); row 0 is replaced by the normalization sum(pi) = 1.
  const auto size = static_cast<Eigen::Index>(N + 1);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(4 * (N + 1));
  for (Eigen::Index j = 0; j < size; ++j) entries.emplace_back(0, j, 1.0);
  for (std::size_t j = 1; j <= N; ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    entries.emplace_back(row, row, -(up(j) + down(j)));
    entries.emplace_back(row, row - 1, up(j - 1));
    if (j < N) entries.emplace_back(row, row + 1, down(j + 1));
  }
  Eigen::SparseMatrix<double> A(size, size);
  A.setFromTriplets(entries.begin(), entries.end());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(size);
  b(0) = 1.0;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(A);
  if (solver.info() != Eigen::Success) throw ModelError("truncated queue chain: factorization failed");
  const Eigen::VectorXd pi = solver.solve(b);
  if (solver.info() != Eigen::Success) throw ModelError("truncated queue chain: solve failed");

  out.pi0 = pi(0);
  out.pr_mid = 0.0;
  out.pr_high = 0.0;
  out.q_avg = 0.0;
  for (std::size_t n = 1; n <= N; ++n) {
    const double v = pi(static_cast<Eigen::Index>(n));
    (n <= static_cast<std::size_t>(M) ? out.pr_mid : out.pr_high) += v;
    out.q_avg += static_cast<double>(n) * v;
  }
  return out;
}

inline QueueDistribution stationary_oracle(double lambda_D, double p_d1, double p_d0, int M) {
  detail::check_queue_inputs(lambda_D, p_d1, p_d0, M);
  if (lambda_D == 0.0) return stationary_oracle(lambda_D, p_d1, p_d0, M, static_cast<std::size_t>(M) + 10);
  return stationary_oracle(lambda_D, p_d1, p_d0, M, default_truncation(lambda_D, p_d0, M));
}

}  // namespace aoid2d
