#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>

#include "aoid2d/params.hpp"
#include "aoid2d/spatial.hpp"

namespace aoid2d {

/// One interfering transmitter as seen at a receiver.
struct Interferer {
  double power = 0.0;     // [W]
  double distance = 0.0;  // [m]
  double fade = 1.0;      // |h|^2
};

/// Received power gain d^(-alpha) from the squared distance.
inline double path_gain_sq(double dist_sq, double alpha) {
  if (alpha == 3.0) return 1.0 / (dist_sq * std::sqrt(dist_sq));
  return std::pow(dist_sq, -0.5 * alpha);
}

/// SINR of a link with the given interferers. A noiseless link with no
/// interference returns +infinity, so it always clears any threshold.
inline double sinr(double tx_power, double link_distance, double fade, std::span<const Interferer> interferers,
                   double sigma2, double alpha) {
  const double signal = tx_power * fade * std::pow(link_distance, -alpha);
  double denom = sigma2;
  for (const auto& i : interferers) denom += i.power * i.fade * std::pow(i.distance, -alpha);
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return signal / denom;
}

/// Conditional decode probabilities for each queue regime.
struct DecodeProbs {
  double p_A0 = 0.0;  // tagged T_AoI, Q = 0
  double p_D1 = 0.0;  // T_D, 1 <= Q <= M
  double p_A1 = 0.0;  // tagged T_AoI, 1 <= Q <= M
  double p_D0 = 0.0;  // T_D, Q > M
};

namespace detail {

// PPP interference exponent for unit access probability:
// pi lambda_A d^2 (power_ratio * beta)^(2/alpha) / sinc(2/alpha).
inline double ppp_exponent(const NetworkParams& p, double link_distance, double power_ratio) {
  const double delta = 2.0 / p.alpha;
  return std::numbers::pi * p.lambda_A * link_distance * link_distance * std::pow(p.beta * power_ratio, delta) /
         sinc(delta);
}

inline double noise_factor(const NetworkParams& p, double link_distance, double tx_power) {
  return std::exp(-p.beta * p.sigma2 * std::pow(link_distance, p.alpha) / tx_power);
}

}  // namespace detail

/// Tagged T_AoI decode probability while the T_D queue is empty.
inline double decode_prob_a0(const NetworkParams& p) {
  return std::exp(-p.p1 * detail::ppp_exponent(p, p.d_A, 1.0)) * detail::noise_factor(p, p.d_A, p.P2);
}

/// T_D decode probability under moderate backlog, with T_AoI nodes active w.p. p2.
inline double decode_prob_d1(const NetworkParams& p) {
  return std::exp(-p.p2 * detail::ppp_exponent(p, p.d_D, p.P2 / p.P1)) * detail::noise_factor(p, p.d_D, p.P1);
}

/// Tagged T_AoI decode probability under moderate backlog. The T_D
/// interferer enters through the mean distance `e_ddi` via the
/// 1 / (1 + (d_A / E[d])^2 (beta P1 / P2)^(2/alpha)) approximation.
inline double decode_prob_a1(const NetworkParams& p, double e_ddi) {
  const double delta = 2.0 / p.alpha;
  const double td_term = (p.d_A * p.d_A) / (e_ddi * e_ddi) * std::pow(p.beta * p.P1 / p.P2, delta);
  return std::exp(-p.p2 * detail::ppp_exponent(p, p.d_A, 1.0)) * detail::noise_factor(p, p.d_A, p.P2) /
         (1.0 + td_term);
}

/// T_D decode probability when it transmits alone.
inline double decode_prob_d0(const NetworkParams& p) { return detail::noise_factor(p, p.d_D, p.P1); }

inline DecodeProbs decode_probs(const NetworkParams& p, double e_ddi) {
  return {decode_prob_a0(p), decode_prob_d1(p), decode_prob_a1(p, e_ddi), decode_prob_d0(p)};
}

inline DecodeProbs decode_probs(const NetworkParams& p) { return decode_probs(p, expected_distance_to_tagged(p)); }

}  // namespace aoid2d
