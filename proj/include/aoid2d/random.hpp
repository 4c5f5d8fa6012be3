#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace aoid2d {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream `stream_id` of the family keyed by `master_seed`.
/// Streams depend only on (master_seed, stream_id), never on scheduling.
inline Engine make_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  const std::uint64_t key = splitmix64(master_seed ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
  return Engine(seq);
}

// The samplers below are written out rather than taken from <random> so
// draws are identical across standard library implementations.

/// Uniform on [0, 1).
template <class G>
double uniform01(G& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Exponential with mean 1 (Rayleigh power fade).
template <class G>
double exponential1(G& g) {
  return -std::log1p(-uniform01(g));
}

template <class G>
bool bernoulli(G& g, double p) {
  return uniform01(g) < p;
}

/// Poisson(mean). Multiplication method below 10, transformed rejection
/// (PTRS, Hormann 1993) above.
template <class G>
std::uint64_t poisson(G& g, double mean) {
  if (mean <= 0.0) return 0;
  if (mean < 10.0) {
    const double limit = std::exp(-mean);
    double prod = uniform01(g);
    std::uint64_t k = 0;
    while (prod > limit) {
      prod *= uniform01(g);
      ++k;
    }
    return k;
  }
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform01(g) - 0.5;
    const double v = uniform01(g);
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

}  // namespace aoid2d
