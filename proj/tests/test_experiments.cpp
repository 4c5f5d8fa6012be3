#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <sstream>

#include "aoid2d/experiments.hpp"
#include "csv_read.hpp"

using namespace aoid2d;

namespace {

CsvTable render(const std::function<void(std::ostream&)>& fn) {
  std::ostringstream os;
  fn(os);
  return parse_csv(os.str());
}

}  // namespace

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2e-4), "2e-04");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(std::strtod(format_double(0.2632401569273185).c_str(), nullptr), 0.2632401569273185);
}

TEST(Csv, FieldQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Csv, ProvenanceLine) {
  std::ostringstream os;
  write_provenance(os, 42, 0xabcdef);
  EXPECT_EQ(os.str(), std::string("# aoid2d ") + std::string(kVersion) + " seed=42 config_hash=abcdef\n");
}

TEST(Analyze, RowIsSelfConsistent) {
  const CsvTable t = render([](std::ostream& os) { write_analyze_csv(os, table1(), 1); });
  ASSERT_EQ(t.rows.size(), 1u);
  ASSERT_EQ(t.comments.size(), 1u);
  EXPECT_EQ(t.num(0, "aoi_avg"), 1.0 / t.num(0, "s_A"));
  EXPECT_EQ(t.header.size(), t.rows[0].size());
  EXPECT_DOUBLE_EQ(t.num(0, "pi0") + t.num(0, "pr_mid") + t.num(0, "pr_high"), 1.0);
}

TEST(Analyze, ByteIdenticalRerun) {
  std::ostringstream a, b;
  write_analyze_csv(a, table1(), 3);
  write_analyze_csv(b, table1(), 3);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, AxisParsing) {
  const SweepAxis a = parse_axis("p2=0.1:0.5:5");
  EXPECT_EQ(a.name, "p2");
  const auto v = a.values();
  ASSERT_EQ(v.size(), 5u);
  EXPECT_DOUBLE_EQ(v[0], 0.1);
  EXPECT_DOUBLE_EQ(v[4], 0.5);
  EXPECT_EQ(parse_axis("M=3").values(), std::vector<double>{3.0});
  EXPECT_THROW(parse_axis("bogus=1:2:3"), ConfigError);
  EXPECT_THROW(parse_axis("p2=1:2"), ConfigError);
  EXPECT_THROW(parse_axis("p2=a:2:3"), ConfigError);
  EXPECT_THROW(parse_axis("p2"), ConfigError);
}

TEST(Sweep, SetParamUsesConfigUnits) {
  NetworkParams p = table1();
  set_param(p, "P2", 0.015);
  EXPECT_DOUBLE_EQ(p.P2, 1.5e-5);
  set_param(p, "beta", 3.0);
  EXPECT_NEAR(p.beta, std::pow(10.0, 0.3), 1e-15);
  set_param(p, "M", 6.0);
  EXPECT_EQ(p.M, 6);
}

TEST(Sweep, SinglePointEqualsAnalyze) {
  const NetworkParams p = table1();
  const CsvTable sweep = render([&](std::ostream& os) {
    write_sweep_csv(os, p, {parse_axis("p2=0.2")}, ExperimentOptions{});
  });
  const CsvTable single = render([&](std::ostream& os) { write_analyze_csv(os, p, 1); });
  EXPECT_EQ(sweep.header, single.header);
  EXPECT_EQ(sweep.rows, single.rows);
}

TEST(Sweep, AoiNonincreasingInThreshold) {
  const CsvTable t = render([](std::ostream& os) {
    write_sweep_csv(os, table1(), {parse_axis("M=1:6:6")}, ExperimentOptions{});
  });
  ASSERT_EQ(t.rows.size(), 6u);
  for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_LE(t.num(i, "aoi_avg"), t.num(i - 1, "aoi_avg"));
}

TEST(Sweep, TwoAxes) {
  const CsvTable t = render([](std::ostream& os) {
    write_sweep_csv(os, table1(), {parse_axis("lambda_D=0.2:0.6:3"), parse_axis("P2=0.005:0.02:4")},
                    ExperimentOptions{});
  });
  ASSERT_EQ(t.rows.size(), 12u);
  EXPECT_DOUBLE_EQ(t.num(11, "lambda_D"), 0.6);
  EXPECT_DOUBLE_EQ(t.num(11, "P2_W"), 2e-5);
}

TEST(Sweep, SimulatedColumnsTrackAnalysis) {
  ExperimentOptions o;
  o.simulate = true;
  o.runs = 30;
  o.seed = 17;
  const CsvTable t = render([&](std::ostream& os) {
    write_sweep_csv(os, table1(), {parse_axis("p2=0.1:0.4:3")}, o);
  });
  ASSERT_EQ(t.rows.size(), 3u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_NEAR(t.num(i, "sim_aoi_avg"), t.num(i, "aoi_avg"), 0.05 * t.num(i, "aoi_avg"));
    EXPECT_NEAR(t.num(i, "sim_delay_avg"), t.num(i, "delay_avg"), 0.05 * t.num(i, "delay_avg"));
  }
}

TEST(Sweep, RejectsUnstablePoint) {
  EXPECT_THROW(render([](std::ostream& os) {
                 write_sweep_csv(os, table1(), {parse_axis("lambda_D=0.99999999")}, ExperimentOptions{});
               }),
               ModelError);
}

TEST(Figures, Fig3DecodeOnlyTdAloneIsConstant) {
  const CsvTable t = render([](std::ostream& os) { write_fig3_csv(os, table1(), 20, 1); });
  ASSERT_EQ(t.rows.size(), 400u);
  for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_EQ(t.str(i, "p_D0"), t.str(0, "p_D0"));
}

TEST(Figures, Fig4HasInteriorMinimum) {
  ExperimentOptions o;
  const CsvTable t = render([&](std::ostream& os) { write_curve_csv(os, table1(), o, false); });
  std::vector<double> series;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.num(i, "lambda_D") == 0.2 && t.num(i, "M") == 3) series.push_back(t.num(i, "aoi_avg"));
  }
  ASSERT_EQ(series.size(), o.curve_points);
  const auto it = std::min_element(series.begin(), series.end());
  EXPECT_NE(it, series.begin());
  EXPECT_NE(it, series.end() - 1);
}

TEST(Figures, Fig5NondecreasingPerSeries) {
  const CsvTable t = render([](std::ostream& os) { write_curve_csv(os, table1(), ExperimentOptions{}, true); });
  std::map<std::pair<double, double>, double> last;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto key = std::pair{t.num(i, "lambda_D"), t.num(i, "M")};
    const double d = t.num(i, "delay_avg");
    if (last.count(key)) {
      EXPECT_GE(d, last[key]);
    }
    last[key] = d;
  }
  EXPECT_EQ(last.size(), 9u);
}

TEST(Figures, Fig6CoversRegionSeries) {
  ExperimentOptions o;
  o.grid_p2 = 20;
  o.grid_P2 = 20;
  const CsvTable t = render([&](std::ostream& os) { write_fig6_csv(os, table1(), o); });
  EXPECT_EQ(t.rows.size(), 4u * 20u);
}

TEST(Simulation, CsvIsDeterministic) {
  NetworkParams p = table1();
  ExperimentOptions o;
  o.runs = 6;
  o.seed = 5;
  o.workers = 1;
  std::ostringstream a, b;
  write_simulation_csv(a, p, run(make_sim_config(p, o)));
  o.workers = 3;
  write_simulation_csv(b, p, run(make_sim_config(p, o)));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find("seed=5"), std::string::npos);
}
