#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "aoid2d/errors.hpp"
#include "aoid2d/metrics.hpp"
#include "aoid2d/parallel.hpp"
#include "aoid2d/params.hpp"
#include "aoid2d/spatial.hpp"

namespace aoid2d {

/// Access probability maximizing p1 exp(-K p1) with
/// K = pi lambda_A d_A^2 beta^(2/alpha) / sinc(2/alpha), clamped to 1.
inline double p1_star(const NetworkParams& p) {
  const double k = std::numbers::pi * p.lambda_A * p.d_A * p.d_A * std::pow(p.beta, 2.0 / p.alpha);
  if (k <= 0.0) return 1.0;
  return std::min(sinc(2.0 / p.alpha) / k, 1.0);
}

/// p1 exp(-K p1): the p1-dependent factor of the empty-queue success rate.
inline double p1_objective(const NetworkParams& p, double p1) {
  const double k = std::numbers::pi * p.lambda_A * p.d_A * p.d_A * std::pow(p.beta, 2.0 / p.alpha) / sinc(2.0 / p.alpha);
  return p1 * std::exp(-k * p1);
}

/// Search grid over (p2, P2). P2 values are in watts.
struct GridSpec {
  std::vector<double> p2;
  std::vector<double> P2;

  /// k/n for k = 1..n on (0, 1] and (0, P_max].
  static GridSpec uniform(std::size_t p2_points, std::size_t P2_points, double P_max) {
    if (p2_points < 1 || P2_points < 1) throw ConfigError("grid", "grid needs at least one point per axis");
    GridSpec g;
    for (std::size_t k = 1; k <= p2_points; ++k) g.p2.push_back(static_cast<double>(k) / static_cast<double>(p2_points));
    for (std::size_t k = 1; k <= P2_points; ++k) {
      g.P2.push_back(P_max * static_cast<double>(k) / static_cast<double>(P2_points));
    }
    return g;
  }
};

struct GridPoint {
  double p2 = 0.0;
  double P2 = 0.0;
  double aoi = std::numeric_limits<double>::infinity();
  double delay = std::numeric_limits<double>::infinity();
  bool stable = false;
  bool feasible = false;
};

/// Row-major (p2 outer, P2 inner) evaluation of the objective and constraints.
struct Surface {
  GridSpec grid;
  double p1 = 0.0;
  double D_max = 0.0;
  std::vector<GridPoint> points;

  const GridPoint& at(std::size_t i_p2, std::size_t j_P2) const { return points[i_p2 * grid.P2.size() + j_P2]; }
};

/// Evaluates the analytical model at every grid point with p1 = p1*.
/// A point is feasible iff lambda_D < p_D0 and D_avg < D_max.
inline Surface evaluate_grid(const NetworkParams& base, const GridSpec& grid, double D_max, unsigned workers = 0) {
  Surface s;
  s.grid = grid;
  s.p1 = p1_star(base);
  s.D_max = D_max;
  s.points.resize(grid.p2.size() * grid.P2.size());
  const double e_ddi = expected_distance_to_tagged(base);
  parallel_for(grid.p2.size(), workers, [&](std::size_t i) {
    NetworkParams p = base;
    p.p1 = s.p1;
    p.p2 = grid.p2[i];
    for (std::size_t j = 0; j < grid.P2.size(); ++j) {
      p.P2 = grid.P2[j];
      GridPoint& pt = s.points[i * grid.P2.size() + j];
      pt.p2 = p.p2;
      pt.P2 = p.P2;
      const DecodeProbs d = decode_probs(p, e_ddi);
      pt.stable = p.lambda_D < d.p_D0;
      if (!pt.stable) continue;
      try {
        const Analysis a = analyze(p, e_ddi);
        pt.aoi = a.report.aoi_avg;
        pt.delay = a.report.delay_avg;
        pt.feasible = pt.delay < D_max;
      } catch (const ModelError&) {
        pt.feasible = false;
      }
    }
  });
  return s;
}

/// Largest feasible P2 per p2 grid value; nullopt where no P2 is feasible.
struct FeasibleBoundary {
  std::vector<double> p2;
  std::vector<std::optional<double>> max_P2;
};

inline FeasibleBoundary boundary_of(const Surface& s) {
  FeasibleBoundary b;
  b.p2 = s.grid.p2;
  b.max_P2.assign(s.grid.p2.size(), std::nullopt);
  for (std::size_t i = 0; i < s.grid.p2.size(); ++i) {
    for (std::size_t j = 0; j < s.grid.P2.size(); ++j) {
      const GridPoint& pt = s.at(i, j);
      if (pt.feasible && (!b.max_P2[i] || pt.P2 > *b.max_P2[i])) b.max_P2[i] = pt.P2;
    }
  }
  return b;
}

inline FeasibleBoundary feasible_region(const NetworkParams& base, const GridSpec& grid, double D_max,
                                        unsigned workers = 0) {
  return boundary_of(evaluate_grid(base, grid, D_max, workers));
}

inline FeasibleBoundary feasible_region(const NetworkParams& base, const GridSpec& grid, unsigned workers = 0) {
  return feasible_region(base, grid, base.D_max, workers);
}

struct OptResult {
  double p1_star = 0.0;
  double p2_star = std::numeric_limits<double>::quiet_NaN();
  double P2_star = std::numeric_limits<double>::quiet_NaN();  // watts
  double aoi_star = std::numeric_limits<double>::infinity();
  double delay_at_opt = std::numeric_limits<double>::quiet_NaN();
  bool feasible = false;
  std::size_t p2_points = 0;
  std::size_t P2_points = 0;
  std::size_t evaluations = 0;
};

/// Argmin of the AoI over the feasible grid points. Ties go to the smaller
/// p2, then the smaller P2.
inline OptResult argmin(const Surface& s) {
  OptResult r;
  r.p1_star = s.p1;
  r.p2_points = s.grid.p2.size();
  r.P2_points = s.grid.P2.size();
  r.evaluations = s.points.size();
  for (const GridPoint& pt : s.points) {
    if (!pt.feasible || !(pt.aoi < r.aoi_star)) continue;
    r.aoi_star = pt.aoi;
    r.p2_star = pt.p2;
    r.P2_star = pt.P2;
    r.delay_at_opt = pt.delay;
    r.feasible = true;
  }
  return r;
}

inline OptResult optimize(const NetworkParams& base, const GridSpec& grid, double D_max, unsigned workers = 0) {
  return argmin(evaluate_grid(base, grid, D_max, workers));
}

inline OptResult optimize(const NetworkParams& base, const GridSpec& grid, unsigned workers = 0) {
  return optimize(base, grid, base.D_max, workers);
}

}  // namespace aoid2d
