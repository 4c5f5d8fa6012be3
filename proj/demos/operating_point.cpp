// Closed-form metrics at the default operating point, checked against a
// short simulation.

#include <cstdio>

#include "aoid2d/aoid2d.hpp"

int main() {
  const aoid2d::NetworkParams p = aoid2d::table1();
  const aoid2d::Analysis a = aoid2d::analyze(p);
  std::printf("p1* = %.4f\n", p.p1);
  std::printf("analytical: AoI %.3f slots, delay %.3f slots\n", a.report.aoi_avg, a.report.delay_avg);

  aoid2d::SimConfig config;
  config.params = p;
  config.runs = 20;
  config.master_seed = 42;
  const aoid2d::SimEstimate est = aoid2d::run(config);
  std::printf("simulated:  AoI %.3f +- %.3f, delay %.3f +- %.3f\n", est.aoi_avg.mean, est.aoi_avg.half_width,
              est.delay_avg.mean, est.delay_avg.half_width);
}
