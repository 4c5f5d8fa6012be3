// aoid2d: analytical model, simulator and optimizer front end.
//
//   aoid2d analyze  --config cfg.json --out results/
//   aoid2d simulate --config cfg.json --seed 7 --runs 100 --slots 10000
//   aoid2d optimize --config cfg.json --grid 200x200
//   aoid2d sweep    --config cfg.json --axis p2=0.05:0.5:10 [--axis M=1:6:6] [--simulate]
//   aoid2d figures  --config cfg.json [--simulate]
//
// Exit status: 0 ok, 1 usage, 2 invalid config or model, 3 infeasible optimization.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "aoid2d/aoid2d.hpp"

namespace fs = std::filesystem;
using namespace aoid2d;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Cli {
  std::string config;
  std::string out = ".";
  std::string grid = "200x200";
  std::vector<std::string> axes;
  std::optional<std::size_t> trace_run;
  std::optional<double> d_max;
  std::string layout = "per_slot";
  std::string field = "extended";
  ExperimentOptions opt;
};

NetworkParams load_params(const Cli& cli) {
  if (cli.config.empty()) {
    Json doc = to_config(table1());
    doc.erase("p1");
    return from_config(apply_env_overrides(std::move(doc)));
  }
  return load_config(cli.config);
}

// Range violations are fatal; instability is fatal unless `allow_unstable`.
NetworkParams checked_params(const Cli& cli, bool allow_unstable) {
  const NetworkParams p = load_params(cli);
  const ValidationReport report = validate(p);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& v : report.violations) {
    const bool stability = v.find("stability") != std::string::npos;
    if (stability && allow_unstable) {
      std::cerr << "warning: " << v << " (simulating anyway)\n";
      continue;
    }
    throw ModelError(v);
  }
  return p;
}

std::ofstream open_output(const Cli& cli, const std::string& name) {
  fs::create_directories(cli.out);
  const fs::path path = fs::path(cli.out) / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot write " + path.string());
  return os;
}

void finish(std::ofstream& os, const std::string& name) {
  os.flush();
  if (!os) throw UsageError("write failed: " + name);
}

GridSpec parse_grid(const std::string& text, double P_max) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw UsageError("--grid must look like 200x200");
  try {
    const long a = std::stol(text.substr(0, x));
    const long b = std::stol(text.substr(x + 1));
    if (a < 1 || b < 1) throw UsageError("--grid sizes must be >= 1");
    return GridSpec::uniform(static_cast<std::size_t>(a), static_cast<std::size_t>(b), P_max);
  } catch (const std::logic_error&) {
    throw UsageError("--grid must look like 200x200");
  }
}

int cmd_analyze(const Cli& cli) {
  const NetworkParams p = checked_params(cli, false);
  const Analysis a = analyze(p);
  auto os = open_output(cli, "analyze.csv");
  write_analyze_csv(os, p, cli.opt.seed);
  finish(os, "analyze.csv");
  std::printf("decode   p_A0=%.6g p_D1=%.6g p_A1=%.6g p_D0=%.6g\n", a.decode.p_A0, a.decode.p_D1, a.decode.p_A1,
              a.decode.p_D0);
  std::printf("queue    pi0=%.6g Pr(1<=Q<=M)=%.6g Pr(Q>M)=%.6g Q_avg=%.6g\n", a.queue.pi0, a.queue.pr_mid,
              a.queue.pr_high, a.queue.q_avg);
  std::printf("metrics  s_A=%.6g s_D=%.6g AoI=%.6g slots delay=%.6g slots\n", a.report.s_A, a.report.s_D,
              a.report.aoi_avg, a.report.delay_avg);
  return kExitOk;
}

int cmd_simulate(const Cli& cli) {
  const NetworkParams p = checked_params(cli, true);
  SimConfig config = make_sim_config(p, cli.opt);
  config.layout = cli.layout == "per_run" ? LayoutMode::per_run : LayoutMode::per_slot;
  config.field = cli.field == "disc" ? InterferenceField::disc : InterferenceField::extended;

  std::optional<std::ofstream> trace_os;
  TraceSink sink;
  if (cli.trace_run) {
    if (*cli.trace_run >= config.runs) throw UsageError("--trace run index out of range");
    const std::string name = "trace_run" + std::to_string(*cli.trace_run) + ".csv";
    trace_os = open_output(cli, name);
    write_provenance(*trace_os, config.master_seed, config_hash(p));
    write_trace_header(*trace_os);
    sink = [&](const SlotTrace& t) { write_trace_row(*trace_os, t); };
  }
  const SimEstimate est = run(config, cli.trace_run, sink);
  auto os = open_output(cli, "simulate.csv");
  write_simulation_csv(os, p, est);
  finish(os, "simulate.csv");
  std::printf("runs=%zu slots=%zu warmup=%zu seed=%llu\n", est.runs, est.slots_per_run, est.warmup,
              static_cast<unsigned long long>(est.seed));
  std::printf("AoI   %.6g +- %.3g slots\n", est.aoi_avg.mean, est.aoi_avg.half_width);
  std::printf("delay %.6g +- %.3g slots\n", est.delay_avg.mean, est.delay_avg.half_width);
  std::printf("s_A   %.6g +- %.3g   s_D %.6g +- %.3g\n", est.s_A.mean, est.s_A.half_width, est.s_D.mean,
              est.s_D.half_width);
  return kExitOk;
}

int cmd_optimize(const Cli& cli) {
  NetworkParams p = load_params(cli);
  if (cli.d_max) p.D_max = *cli.d_max;
  const GridSpec grid = parse_grid(cli.grid, p.P_max);
  const Surface s = evaluate_grid(p, grid, p.D_max, cli.opt.workers);
  const OptResult r = argmin(s);
  auto os = open_output(cli, "optimize.csv");
  write_optimum_csv(os, p, r, cli.opt.seed);
  finish(os, "optimize.csv");
  auto gs = open_output(cli, "optimize_grid.csv");
  write_surface_csv(gs, p, s, cli.opt.seed);
  finish(gs, "optimize_grid.csv");
  if (!r.feasible) {
    std::cerr << "infeasible: no grid point satisfies lambda_D < p_D0 and D_avg < D_max = " << p.D_max << '\n';
    return kExitInfeasible;
  }
  std::printf("p1*=%.6g p2*=%.6g P2*=%.6g mW AoI*=%.6g delay=%.6g (%zu points)\n", r.p1_star, r.p2_star,
              watts_to_mw(r.P2_star), r.aoi_star, r.delay_at_opt, r.evaluations);
  return kExitOk;
}

int cmd_sweep(const Cli& cli) {
  const NetworkParams p = checked_params(cli, false);
  if (cli.axes.empty()) throw UsageError("sweep needs at least one --axis");
  std::vector<SweepAxis> axes;
  for (const auto& a : cli.axes) axes.push_back(parse_axis(a));
  auto os = open_output(cli, "sweep.csv");
  write_sweep_csv(os, p, axes, cli.opt);
  finish(os, "sweep.csv");
  return kExitOk;
}

int cmd_figures(const Cli& cli) {
  const NetworkParams p = checked_params(cli, false);
  {
    auto os = open_output(cli, "fig3.csv");
    write_fig3_csv(os, p, 20, cli.opt.seed);
    finish(os, "fig3.csv");
  }
  {
    auto os = open_output(cli, "fig4.csv");
    write_curve_csv(os, p, cli.opt, false);
    finish(os, "fig4.csv");
  }
  {
    auto os = open_output(cli, "fig5.csv");
    write_curve_csv(os, p, cli.opt, true);
    finish(os, "fig5.csv");
  }
  {
    auto os = open_output(cli, "fig6.csv");
    write_fig6_csv(os, p, cli.opt);
    finish(os, "fig6.csv");
  }
  {
    auto os = open_output(cli, "table2.csv");
    write_table2_csv(os, p, cli.opt);
    finish(os, "table2.csv");
  }
  std::printf("wrote fig3.csv fig4.csv fig5.csv fig6.csv table2.csv to %s\n", cli.out.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Backlog-aware D2D access: AoI / delay analysis, simulation and optimization"};
  app.require_subcommand(1);
  Cli cli;

  app.add_option("--config", cli.config, "JSON config (defaults to the evaluation table operating point)");
  app.add_option("--out", cli.out, "output directory")->capture_default_str();
  app.add_option("--seed", cli.opt.seed, "master seed")->capture_default_str();
  app.add_option("--runs", cli.opt.runs, "simulation runs")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--slots", cli.opt.slots, "slots per run, warmup included")->capture_default_str();
  app.add_option("--warmup", cli.opt.warmup, "warmup slots per run")->capture_default_str();
  app.add_option("--workers", cli.opt.workers, "worker threads, 0 = all cores")->capture_default_str();
  app.add_option("--grid", cli.grid, "p2 x P2 grid points")->capture_default_str();
  app.add_option("--points", cli.opt.curve_points, "p2 points per figure curve")->capture_default_str();
  app.add_option("--axis", cli.axes, "sweep axis name=min:max:points (config units)");
  app.add_option("--dmax", cli.d_max, "delay constraint override [slots]");
  app.add_option("--trace", cli.trace_run, "dump the slot trace of this run index");
  app.add_option("--layout", cli.layout, "interferer layout: per_slot | per_run")
      ->check(CLI::IsMember({"per_slot", "per_run"}))
      ->capture_default_str();
  app.add_option("--field", cli.field, "interferer field: extended | disc")
      ->check(CLI::IsMember({"extended", "disc"}))
      ->capture_default_str();
  app.add_flag("--simulate", cli.opt.simulate, "add simulated columns to sweeps and figures");

  auto* analyze_cmd = app.add_subcommand("analyze", "closed-form metrics for one parameter set")->fallthrough();
  auto* simulate_cmd = app.add_subcommand("simulate", "slot-level Monte-Carlo estimate")->fallthrough();
  auto* optimize_cmd = app.add_subcommand("optimize", "grid search for (p2*, P2*)")->fallthrough();
  auto* sweep_cmd = app.add_subcommand("sweep", "metrics over a 1-D or 2-D parameter grid")->fallthrough();
  auto* figures_cmd = app.add_subcommand("figures", "figure and table datasets")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(cli);
    if (simulate_cmd->parsed()) return cmd_simulate(cli);
    if (optimize_cmd->parsed()) return cmd_optimize(cli);
    if (sweep_cmd->parsed()) return cmd_sweep(cli);
    if (figures_cmd->parsed()) return cmd_figures(cli);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
