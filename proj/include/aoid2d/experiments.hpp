#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "aoid2d/channel.hpp"
#include "aoid2d/config.hpp"
#include "aoid2d/csv.hpp"
#include "aoid2d/errors.hpp"
#include "aoid2d/metrics.hpp"
#include "aoid2d/optimizer.hpp"
#include "aoid2d/params.hpp"
#include "aoid2d/simulator.hpp"

namespace aoid2d {

// CSV producers shared by the command-line tool and the tests. Every table
// starts with the provenance comment line.

struct ExperimentOptions {
  std::uint64_t seed = 1;
  std::size_t runs = 100;
  std::size_t slots = 10'000;
  std::size_t warmup = 1'000;
  unsigned workers = 0;
  std::size_t grid_p2 = 200;
  std::size_t grid_P2 = 200;
  std::size_t curve_points = 20;
  bool simulate = false;
};

inline SimConfig make_sim_config(const NetworkParams& p, const ExperimentOptions& o) {
  SimConfig c;
  c.params = p;
  c.runs = o.runs;
  c.slots_per_run = o.slots;
  c.warmup = o.warmup;
  c.master_seed = o.seed;
  c.workers = o.workers;
  return c;
}

// ---------------------------------------------------------------------------
// analyze

inline const std::vector<std::string>& param_columns() {
  static const std::vector<std::string> cols{"lambda_A", "lambda_D", "d_D",   "d_A",     "d_D0", "R",
                                             "alpha",    "beta",     "sigma2_W", "P1_W", "P2_W", "P_max_W",
                                             "p1",       "p2",       "M",     "D_max"};
  return cols;
}

inline void add_params(CsvRow& row, const NetworkParams& p) {
  row.add(p.lambda_A).add(p.lambda_D).add(p.d_D).add(p.d_A).add(p.d_D0).add(p.R).add(p.alpha).add(p.beta);
  row.add(p.sigma2).add(p.P1).add(p.P2).add(p.P_max).add(p.p1).add(p.p2).add(p.M).add(p.D_max);
}

inline const std::vector<std::string>& analysis_columns() {
  static const std::vector<std::string> cols{"p_A0",   "p_D1",    "p_A1",  "p_D0", "pi0",     "pr_mid",
                                             "pr_high", "q_avg",  "s_A",   "s_D",  "aoi_avg", "delay_avg"};
  return cols;
}

inline void add_analysis(CsvRow& row, const Analysis& a) {
  row.add(a.decode.p_A0).add(a.decode.p_D1).add(a.decode.p_A1).add(a.decode.p_D0);
  row.add(a.queue.pi0).add(a.queue.pr_mid).add(a.queue.pr_high).add(a.queue.q_avg);
  row.add(a.report.s_A).add(a.report.s_D).add(a.report.aoi_avg).add(a.report.delay_avg);
}

inline std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline void write_analyze_csv(std::ostream& os, const NetworkParams& p, std::uint64_t seed) {
  const Analysis a = analyze(p);
  write_provenance(os, seed, config_hash(p));
  write_header(os, concat(param_columns(), analysis_columns()));
  CsvRow row;
  add_params(row, p);
  add_analysis(row, a);
  row.write(os);
}

// ---------------------------------------------------------------------------
// simulate

inline void write_simulation_csv(std::ostream& os, const NetworkParams& p, const SimEstimate& est) {
  std::optional<Analysis> a;
  try {
    a = analyze(p);
  } catch (const ModelError&) {
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  write_provenance(os, est.seed, config_hash(p));
  write_header(os, {"metric", "mean", "std_dev", "half_width", "samples", "analytical"});
  auto put = [&](const std::string& name, const Estimate& e, double analytic) {
    CsvRow().add(name).add(e.mean).add(e.std_dev).add(e.half_width).add(e.samples).add(analytic).write(os);
  };
  put("s_A", est.s_A, a ? a->report.s_A : nan);
  put("s_D", est.s_D, a ? a->report.s_D : nan);
  put("aoi_avg", est.aoi_avg, a ? a->report.aoi_avg : nan);
  put("delay_avg", est.delay_avg, a ? a->report.delay_avg : nan);
  put("q_avg", est.q_avg, a ? a->report.q_avg : nan);
  put("pr_empty", est.pr_empty, a ? a->queue.pi0 : nan);
  put("pr_mid", est.pr_mid, a ? a->queue.pr_mid : nan);
  put("pr_high", est.pr_high, a ? a->queue.pr_high : nan);
  put("queue_time", est.queue_time, a ? a->report.q_avg / p.lambda_D : nan);
  put("arrival_rate", est.arrival_rate, p.lambda_D);
  for (std::size_t k = 0; k < est.violation.size(); ++k) {
    const int c = est.violation_thresholds[k];
    put("violation_" + std::to_string(c), est.violation[k], a ? a->report.violation(c) : nan);
  }
}

inline void write_trace_header(std::ostream& os) {
  write_header(os, {"slot", "queue", "active_count", "tagged_aoi", "td_decode", "tagged_decode"});
}

inline void write_trace_row(std::ostream& os, const SlotTrace& t) {
  CsvRow().add(t.slot).add(t.queue).add(t.active_count).add(static_cast<std::size_t>(t.tagged_aoi))
      .add(t.td_decode).add(t.tagged_decode).write(os);
}

// ---------------------------------------------------------------------------
// optimize

inline void write_optimum_csv(std::ostream& os, const NetworkParams& p, const OptResult& r, std::uint64_t seed) {
  write_provenance(os, seed, config_hash(p));
  write_header(os, {"lambda_D", "M", "D_max", "p1_star", "p2_star", "P2_star_mW", "aoi_star", "delay_at_opt",
                    "feasible", "p2_points", "P2_points", "evaluations"});
  CsvRow()
      .add(p.lambda_D).add(p.M).add(p.D_max).add(r.p1_star).add(r.p2_star).add(watts_to_mw(r.P2_star))
      .add(r.aoi_star).add(r.delay_at_opt).add(r.feasible).add(r.p2_points).add(r.P2_points).add(r.evaluations)
      .write(os);
}

inline void write_surface_csv(std::ostream& os, const NetworkParams& p, const Surface& s, std::uint64_t seed) {
  write_provenance(os, seed, config_hash(p));
  write_header(os, {"p2", "P2_mW", "aoi_avg", "delay_avg", "stable", "feasible"});
  for (const GridPoint& pt : s.points) {
    CsvRow().add(pt.p2).add(watts_to_mw(pt.P2)).add(pt.aoi).add(pt.delay).add(pt.stable).add(pt.feasible).write(os);
  }
}

// ---------------------------------------------------------------------------
// sweep

/// One sweep dimension. Bounds are in config-file units (mW, dB, dBm).
struct SweepAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 1;

  std::vector<double> values() const {
    if (points == 1) return {min};
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) {
      v[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return v;
  }
};

/// Parses "name=min:max:points" or "name=value".
inline SweepAxis parse_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ConfigError(std::string(text), "axis must look like name=min:max:points");
  SweepAxis axis;
  axis.name = std::string(text.substr(0, eq));
  if (!find_key(axis.name)) throw ConfigError(axis.name, "sweep axis is not a parameter");
  std::vector<std::string_view> parts;
  std::string_view rest = text.substr(eq + 1);
  for (;;) {
    const auto colon = rest.find(':');
    parts.push_back(rest.substr(0, colon));
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  auto number = [&](std::string_view s) {
    const auto v = detail::parse_double(s);
    if (!v) throw ConfigError(axis.name, "axis bound '" + std::string(s) + "' is not a number");
    return *v;
  };
  if (parts.size() == 1) {
    axis.min = axis.max = number(parts[0]);
  } else if (parts.size() == 3) {
    axis.min = number(parts[0]);
    axis.max = number(parts[1]);
    const double n = number(parts[2]);
    if (n < 1 || n != std::floor(n)) throw ConfigError(axis.name, "axis point count must be a positive integer");
    axis.points = static_cast<std::size_t>(n);
  } else {
    throw ConfigError(axis.name, "axis must look like name=min:max:points");
  }
  return axis;
}

/// Sets one parameter from a config-unit value.
inline void set_param(NetworkParams& p, std::string_view name, double value) {
  const ConfigKey* key = find_key(name);
  if (!key) throw ConfigError(std::string(name), "unknown parameter");
  if (name == "M") {
    const double r = std::round(value);
    if (r < 1.0) throw ConfigError("M", "must be >= 1");
    p.M = static_cast<int>(r);
    return;
  }
  *detail::field_of(p, name) = detail::to_si(key->unit, value);
}

inline void write_sweep_csv(std::ostream& os, const NetworkParams& base, const std::vector<SweepAxis>& axes,
                            const ExperimentOptions& opt) {
  if (axes.empty() || axes.size() > 2) throw ConfigError("axis", "sweep takes one or two axes");
  write_provenance(os, opt.seed, config_hash(base));
  std::vector<std::string> cols = concat(param_columns(), analysis_columns());
  if (opt.simulate) {
    cols = concat(cols, {"sim_s_A", "sim_s_A_hw", "sim_s_D", "sim_s_D_hw", "sim_aoi_avg", "sim_aoi_avg_hw",
                         "sim_delay_avg", "sim_delay_avg_hw", "sim_q_avg", "sim_q_avg_hw"});
  }
  write_header(os, cols);
  const std::vector<double> outer = axes[0].values();
  const std::vector<double> inner = axes.size() == 2 ? axes[1].values() : std::vector<double>{0.0};
  for (double u : outer) {
    for (double v : inner) {
      NetworkParams p = base;
      set_param(p, axes[0].name, u);
      if (axes.size() == 2) set_param(p, axes[1].name, v);
      const auto report = validate(p);
      if (!report.ok()) throw ModelError("sweep point invalid: " + report.violations.front());
      CsvRow row;
      add_params(row, p);
      add_analysis(row, analyze(p));
      if (opt.simulate) {
        const SimEstimate e = run(make_sim_config(p, opt));
        for (const Estimate* m : {&e.s_A, &e.s_D, &e.aoi_avg, &e.delay_avg, &e.q_avg}) {
          row.add(m->mean).add(m->half_width);
        }
      }
      row.write(os);
    }
  }
}

// ---------------------------------------------------------------------------
// figures

inline std::vector<double> unit_grid(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t k = 1; k <= n; ++k) v[k - 1] = static_cast<double>(k) / static_cast<double>(n);
  return v;
}

/// Decode probabilities over a (p1, p2) grid at the configured P2.
inline void write_fig3_csv(std::ostream& os, const NetworkParams& base, std::size_t points, std::uint64_t seed) {
  write_provenance(os, seed, config_hash(base));
  write_header(os, {"p1", "p2", "p_A0", "p_D1", "p_A1", "p_D0"});
  const double e_ddi = expected_distance_to_tagged(base);
  for (double p1 : unit_grid(points)) {
    for (double p2 : unit_grid(points)) {
      NetworkParams p = base;
      p.p1 = p1;
      p.p2 = p2;
      const DecodeProbs d = decode_probs(p, e_ddi);
      CsvRow().add(p1).add(p2).add(d.p_A0).add(d.p_D1).add(d.p_A1).add(d.p_D0).write(os);
    }
  }
}

inline constexpr double kCurveLambdas[] = {0.2, 0.6, 0.8};
inline constexpr int kCurveMs[] = {1, 3, 9};

/// AoI (fig4) or delay (fig5) versus p2 per (lambda_D, M) series.
inline void write_curve_csv(std::ostream& os, const NetworkParams& base, const ExperimentOptions& opt, bool delay) {
  write_provenance(os, opt.seed, config_hash(base));
  const std::string metric = delay ? "delay_avg" : "aoi_avg";
  std::vector<std::string> cols{"lambda_D", "M", "p2", metric};
  if (opt.simulate) cols = concat(cols, {"sim_" + metric, "sim_" + metric + "_hw"});
  write_header(os, cols);
  const double e_ddi = expected_distance_to_tagged(base);
  for (double lambda : kCurveLambdas) {
    for (int m : kCurveMs) {
      for (double p2 : unit_grid(opt.curve_points)) {
        NetworkParams p = base;
        p.lambda_D = lambda;
        p.M = m;
        p.p2 = p2;
        const Analysis a = analyze(p, e_ddi);
        CsvRow row;
        row.add(lambda).add(m).add(p2).add(delay ? a.report.delay_avg : a.report.aoi_avg);
        if (opt.simulate) {
          const SimEstimate e = run(make_sim_config(p, opt));
          const Estimate& est = delay ? e.delay_avg : e.aoi_avg;
          row.add(est.mean).add(est.half_width);
        }
        row.write(os);
      }
    }
  }
}

inline constexpr double kRegionLambdas[] = {0.2, 0.6};
inline constexpr int kRegionMs[] = {1, 3};

/// Feasible-region boundary per (lambda_D, M); empty max_P2 where infeasible.
inline void write_fig6_csv(std::ostream& os, const NetworkParams& base, const ExperimentOptions& opt) {
  write_provenance(os, opt.seed, config_hash(base));
  write_header(os, {"lambda_D", "M", "p2", "max_P2_mW"});
  const GridSpec grid = GridSpec::uniform(opt.grid_p2, opt.grid_P2, base.P_max);
  for (double lambda : kRegionLambdas) {
    for (int m : kRegionMs) {
      NetworkParams p = base;
      p.lambda_D = lambda;
      p.M = m;
      const FeasibleBoundary b = feasible_region(p, grid, p.D_max, opt.workers);
      for (std::size_t i = 0; i < b.p2.size(); ++i) {
        CsvRow row;
        row.add(lambda).add(m).add(b.p2[i]);
        if (b.max_P2[i]) {
          row.add(watts_to_mw(*b.max_P2[i]));
        } else {
          row.add(std::string_view{});
        }
        row.write(os);
      }
    }
  }
}

inline constexpr double kTableLambdas[] = {0.2, 0.6, 0.8};
inline constexpr int kTableMs[] = {1, 3, 6};

/// Grid-search optimum for each (lambda_D, M) row.
inline std::vector<std::pair<NetworkParams, OptResult>> optimum_table(const NetworkParams& base, const GridSpec& grid,
                                                                      unsigned workers) {
  std::vector<std::pair<NetworkParams, OptResult>> rows;
  for (double lambda : kTableLambdas) {
    for (int m : kTableMs) {
      NetworkParams p = base;
      p.lambda_D = lambda;
      p.M = m;
      rows.emplace_back(p, optimize(p, grid, p.D_max, workers));
    }
  }
  return rows;
}

inline void write_table2_csv(std::ostream& os, const NetworkParams& base, const ExperimentOptions& opt) {
  write_provenance(os, opt.seed, config_hash(base));
  write_header(os, {"lambda_D", "M", "p1_star", "p2_star", "P2_star_mW", "aoi_star", "delay_at_opt", "feasible"});
  const GridSpec grid = GridSpec::uniform(opt.grid_p2, opt.grid_P2, base.P_max);
  for (const auto& [p, r] : optimum_table(base, grid, opt.workers)) {
    CsvRow()
        .add(p.lambda_D).add(p.M).add(r.p1_star).add(r.p2_star).add(watts_to_mw(r.P2_star)).add(r.aoi_star)
        .add(r.delay_at_opt).add(r.feasible)
        .write(os);
  }
}

}  // namespace aoid2d
