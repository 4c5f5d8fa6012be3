#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <ostream>
#include <vector>

#include "aoid2d/errors.hpp"
#include "aoid2d/params.hpp"
#include "aoid2d/random.hpp"

namespace aoid2d {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }

/// Node positions for one realization of the network.
///
/// T_AoI transmitters lie inside the sampling disc centered on the origin.
/// Their receivers sit d_A away at a uniform orientation and may fall
/// outside the disc. The T_D receiver is at the origin and its transmitter
/// at (d_D0, 0).
struct Layout {
  std::vector<Point> aoi_tx;
  std::vector<Point> aoi_rx;
  Point td_tx;
  Point td_rx;

  std::size_t size() const { return aoi_tx.size(); }
};

template <class G>
Point uniform_in_disc(G& g, double radius) {
  // Rejection from the bounding square keeps this free of trig calls.
  for (;;) {
    const double x = 2.0 * uniform01(g) - 1.0;
    const double y = 2.0 * uniform01(g) - 1.0;
    if (x * x + y * y <= 1.0) return {radius * x, radius * y};
  }
}

template <class G>
Point offset_uniform_direction(G& g, Point from, double length) {
  const double theta = 2.0 * std::numbers::pi * uniform01(g);
  return {from.x + length * std::cos(theta), from.y + length * std::sin(theta)};
}

/// Homogeneous PPP of density lambda_A on the disc of radius `radius`.
template <class G>
Layout sample_layout(const NetworkParams& params, double radius, G& g) {
  Layout layout;
  layout.td_rx = {0.0, 0.0};
  layout.td_tx = {params.d_D0, 0.0};
  const double mean = params.lambda_A * std::numbers::pi * radius * radius;
  const auto count = static_cast<std::size_t>(poisson(g, mean));
  layout.aoi_tx.reserve(count);
  layout.aoi_rx.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Point tx = uniform_in_disc(g, radius);
    layout.aoi_tx.push_back(tx);
    layout.aoi_rx.push_back(offset_uniform_direction(g, tx, params.d_A));
  }
  return layout;
}

template <class G>
Layout sample_layout(const NetworkParams& params, G& g) {
  return sample_layout(params, params.R, g);
}

/// Debug dump: one row per node, roles td_tx, td_rx, aoi_tx, aoi_rx.
inline void write_layout_csv(std::ostream& os, const Layout& layout) {
  os << "node_id,role,x,y\n";
  os << "0,td_tx," << layout.td_tx.x << ',' << layout.td_tx.y << '\n';
  os << "0,td_rx," << layout.td_rx.x << ',' << layout.td_rx.y << '\n';
  for (std::size_t i = 0; i < layout.size(); ++i) {
    os << i + 1 << ",aoi_tx," << layout.aoi_tx[i].x << ',' << layout.aoi_tx[i].y << '\n';
    os << i + 1 << ",aoi_rx," << layout.aoi_rx[i].x << ',' << layout.aoi_rx[i].y << '\n';
  }
}

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureSpec {
  double rel_tol = 1e-6;
  int max_depth = 48;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute
};

namespace detail {

template <class F>
void adaptive_simpson_step(const F& f, double a, double b, double fa, double fm, double fb,
                           double whole, double abs_tol, int depth, QuadratureResult& acc) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * abs_tol) {
    // Richardson extrapolation of the two Simpson levels.
    acc.value += left + right + delta / 15.0;
    acc.error_estimate += std::fabs(delta) / 15.0;
    return;
  }
  adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1, acc);
  adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1, acc);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction on [a, b].
/// `abs_tol` bounds the summed local error estimates.
template <class F>
QuadratureResult adaptive_simpson(const F& f, double a, double b, double abs_tol, int max_depth) {
  QuadratureResult acc;
  if (a == b) return acc;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth, acc);
  return acc;
}

/// Mean distance from the T_D transmitter, at distance d_D0 from the origin,
/// to a point drawn uniformly from the disc of radius R:
///
///   (1/2pi) int_0^{2pi} int_0^R (2r/R^2) sqrt(r^2 + d_D0^2 - 2 r d_D0 cos(theta)) dr dtheta
///
/// Throws QuadratureError when the requested relative tolerance is not met.
inline QuadratureResult expected_distance_quadrature(double R, double d_D0, QuadratureSpec spec = {}) {
  if (!(R > 0.0) || !(d_D0 >= 0.0)) throw ModelError("expected distance needs R > 0 and d_D0 >= 0");
  const double R2 = R * R;
  const double d2 = d_D0 * d_D0;
  // Scale of the answer, used to turn the relative tolerance into absolute ones.
  const double scale = std::max(d_D0, 2.0 * R / 3.0);
  const double inner_tol = 1e-3 * spec.rel_tol * scale;
  double inner_err = 0.0;

  auto inner = [&](double theta) {
    const double c = std::cos(theta);
    auto integrand = [&](double r) {
      const double s = r * r + d2 - 2.0 * r * d_D0 * c;
      return 2.0 * r / R2 * std::sqrt(std::max(s, 0.0));
    };
    // Split at the minimum of the distance so each piece is smooth.
    const double split = d_D0 * c;
    QuadratureResult res;
    if (split > 0.0 && split < R) {
      const auto lo = adaptive_simpson(integrand, 0.0, split, 0.5 * inner_tol, spec.max_depth);
      const auto hi = adaptive_simpson(integrand, split, R, 0.5 * inner_tol, spec.max_depth);
      res.value = lo.value + hi.value;
      res.error_estimate = lo.error_estimate + hi.error_estimate;
    } else {
      res = adaptive_simpson(integrand, 0.0, R, inner_tol, spec.max_depth);
    }
    inner_err = std::max(inner_err, res.error_estimate);
    return res.value;
  };

  // The integrand is symmetric in theta about pi.
  const auto outer = adaptive_simpson(inner, 0.0, std::numbers::pi, 0.1 * spec.rel_tol * scale * std::numbers::pi,
                                      spec.max_depth);
  QuadratureResult result;
  result.value = outer.value / std::numbers::pi;
  result.error_estimate = (outer.error_estimate + std::numbers::pi * inner_err) / std::numbers::pi;
  const double achieved = result.error_estimate / std::fabs(result.value);
  if (!(achieved <= spec.rel_tol)) {
    throw QuadratureError("expected distance quadrature did not reach tolerance", achieved);
  }
  return result;
}

/// E[d_{D,i}] in meters for the given parameters.
inline double expected_distance_to_tagged(const NetworkParams& params, QuadratureSpec spec = {}) {
  return expected_distance_quadrature(params.R, params.d_D0, spec).value;
}

/// Integral of |x - y|^(-alpha) over the plane outside the origin-centered
/// disc of radius `field_radius`, for a point y at distance `rho` < field_radius
/// from the origin. Multiplied by density and power this is the mean
/// interference (Campbell) from nodes beyond a truncated field.
///
/// Uses the circle average r^(-alpha) 2F1(alpha/2, alpha/2; 1; rho^2/r^2)
/// integrated term by term.
inline double far_field_gain(double alpha, double field_radius, double rho) {
  if (!(alpha > 2.0)) throw ModelError("far-field interference diverges for alpha <= 2");
  if (!(rho >= 0.0 && rho < field_radius)) throw ModelError("far-field point must lie inside the field");
  const double z = (rho / field_radius) * (rho / field_radius);
  const double half = 0.5 * alpha;
  double coeff = 1.0;  // ((alpha/2)_k / k!)^2
  double zk = 1.0;
  double sum = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double term = coeff * zk / (alpha + 2.0 * k - 2.0);
    sum += term;
    if (term < 1e-17 * sum) break;
    const double ratio = (half + k) / (k + 1.0);
    coeff *= ratio * ratio;
    zk *= z;
  }
  return 2.0 * std::numbers::pi * std::pow(field_radius, 2.0 - alpha) * sum;
}

}  // namespace aoid2d
