#pragma once

#include <cmath>
#include <limits>

#include "aoid2d/channel.hpp"
#include "aoid2d/errors.hpp"
#include "aoid2d/params.hpp"
#include "aoid2d/queue.hpp"
#include "aoid2d/spatial.hpp"

namespace aoid2d {

/// Per-slot probability that the tagged T_AoI receiver gets a fresh update:
/// p1 p_A0 Pr(Q=0) + p2 p_A1 Pr(1<=Q<=M). T_AoI nodes are silent for Q > M.
inline double s_a(const DecodeProbs& decode, const QueueDistribution& q, double p1, double p2) {
  return p1 * decode.p_A0 * q.pi0 + p2 * decode.p_A1 * q.pr_mid;
}

/// Average T_D service probability over busy slots.
inline double s_d(const DecodeProbs& decode, const QueueDistribution& q) {
  const double busy = q.pr_mid + q.pr_high;
  if (!(busy > 0.0)) throw ModelError("s_D undefined: the queue is never busy (lambda_D = 0)");
  return (q.pr_mid * decode.p_D1 + q.pr_high * decode.p_D0) / busy;
}

/// Mean AoI in slots, 1 / s_A. +infinity when no update ever succeeds.
inline double aoi_average(double s_a) {
  if (s_a <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / s_a;
}

/// Pr(AoI > c) = (1 - s_A)^c.
inline double aoi_violation(double s_a, int c) { return std::pow(1.0 - s_a, c); }

/// Mean T_D packet delay: Little's-law queueing time plus 1 / s_D.
inline double delay_average(const QueueDistribution& q, double lambda_D, double s_d) {
  if (!(lambda_D > 0.0)) throw ModelError("delay undefined for lambda_D = 0");
  if (!(s_d > 0.0)) throw ModelError("delay undefined for s_D = 0");
  return q.q_avg / lambda_D + 1.0 / s_d;
}

struct MetricsReport {
  double s_A = 0.0;
  double s_D = 0.0;
  double aoi_avg = 0.0;
  double delay_avg = 0.0;
  double q_avg = 0.0;

  double violation(int c) const { return aoi_violation(s_A, c); }
};

/// Everything the analytical model says about one parameter set.
struct Analysis {
  NetworkParams params;
  double e_ddi = 0.0;
  DecodeProbs decode;
  QueueDistribution queue;
  MetricsReport report;
};

/// Runs channel -> queue -> metrics. `e_ddi` depends only on (R, d_D0), so
/// sweeps pass it in rather than recomputing the quadrature per point.
inline Analysis analyze(const NetworkParams& params, double e_ddi) {
  Analysis a;
  a.params = params;
  a.e_ddi = e_ddi;
  a.decode = decode_probs(params, e_ddi);
  a.queue = stationary(params.lambda_D, a.decode.p_D1, a.decode.p_D0, params.M);
  a.report.s_A = s_a(a.decode, a.queue, params.p1, params.p2);
  a.report.s_D = s_d(a.decode, a.queue);
  a.report.aoi_avg = aoi_average(a.report.s_A);
  a.report.delay_avg = delay_average(a.queue, params.lambda_D, a.report.s_D);
  a.report.q_avg = a.queue.q_avg;
  return a;
}

inline Analysis analyze(const NetworkParams& params) { return analyze(params, expected_distance_to_tagged(params)); }

}  // namespace aoid2d
