#pragma once

#include <cmath>
#include <numbers>

namespace aoid2d {

// Unit conversions. The config file speaks dB/dBm/mW, everything else SI.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
constexpr double mw_to_watts(double mw) { return mw * 1e-3; }
constexpr double watts_to_mw(double w) { return w * 1e3; }

/// Normalized sinc, sin(pi x) / (pi x), with sinc(0) = 1.
inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

/// Physical and protocol parameters of the network, in SI linear units.
///
/// The default member values are the evaluation point used throughout the
/// project: Table-I physical constants, lambda_D = 0.2, M = 3, p2 = 0.2,
/// P2 = 0.01 mW. p1 defaults to 0.2; use table1() in config.hpp to get the
/// same point with p1 set to its closed-form optimum.
struct NetworkParams {
  double lambda_A = 2e-4;  // T_AoI transmitter density [1/m^2]
  double lambda_D = 0.2;   // T_D arrival probability per slot
  double d_D = 100.0;      // T_D link distance [m]
  double d_A = 50.0;       // T_AoI link distance [m]
  double d_D0 = 100.0;     // T_D transmitter to region origin [m]
  double R = 300.0;        // region radius [m]
  double alpha = 3.0;      // path-loss exponent
  double beta = 1.0;       // capture threshold (linear)
  double sigma2 = 1e-12;   // noise power [W]
  double P1 = 0.1;         // T_D transmit power [W]
  double P2 = 1e-5;        // T_AoI transmit power [W]
  double P_max = 2e-5;     // T_AoI power cap [W]
  double p1 = 0.2;         // T_AoI access probability while Q = 0
  double p2 = 0.2;         // T_AoI access probability while 1 <= Q <= M
  int M = 3;               // backlog threshold
  double D_max = 5.0;      // delay constraint [slots]

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

}  // namespace aoid2d
