#pragma once

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "aoid2d/channel.hpp"
#include "aoid2d/errors.hpp"
#include "aoid2d/parallel.hpp"
#include "aoid2d/params.hpp"
#include "aoid2d/random.hpp"
#include "aoid2d/spatial.hpp"

namespace aoid2d {

// Slot-level Monte-Carlo model of the backlog-aware protocol.
//
// Per slot: the T_D queue length Q is read at slot start; T_AoI nodes access
// the channel w.p. p1 (Q = 0), p2 (1 <= Q <= M) or stay silent (Q > M); the
// T_D transmits whenever Q >= 1. Every active link draws a fresh Rayleigh
// fade and a receiver decodes iff its SINR exceeds beta. The T_D head-of-line
// packet leaves on success, a Bernoulli(lambda_D) arrival joins at slot end,
// and the tagged receiver's AoI resets to 1 on a decoded update or grows by 1.

/// How T_AoI interferer positions evolve.
enum class LayoutMode {
  per_slot,  // fresh PPP realization every slot
  per_run,   // one PPP realization per run, fixed across its slots
};

/// Which T_AoI population interferes.
enum class InterferenceField {
  extended,  // PPP out to field_radius_factor * R plus the mean interference beyond
  disc,      // PPP restricted to the region disc of radius R
};

struct TaggedPairPolicy {
  enum class Kind { resample_uniform_each_run, fixed_position };
  Kind kind = Kind::resample_uniform_each_run;
  Point position{};  // transmitter position for fixed_position

  static TaggedPairPolicy fixed(Point p) { return {Kind::fixed_position, p}; }
};

inline const char* to_string(LayoutMode m) { return m == LayoutMode::per_slot ? "per_slot" : "per_run"; }
inline const char* to_string(InterferenceField f) { return f == InterferenceField::extended ? "extended" : "disc"; }

struct SimConfig {
  NetworkParams params;
  std::size_t slots_per_run = 10'000;  // includes the warmup
  std::size_t runs = 100;
  std::size_t warmup = 1'000;
  std::uint64_t master_seed = 1;
  TaggedPairPolicy tagged_pair;
  LayoutMode layout = LayoutMode::per_slot;
  InterferenceField field = InterferenceField::extended;
  double field_radius_factor = 2.0;
  std::vector<int> violation_thresholds{1, 5, 10, 20};
  unsigned workers = 0;  // 0: one per hardware thread; never affects results
};

inline double field_radius(const SimConfig& c) {
  return c.field == InterferenceField::extended ? c.field_radius_factor * c.params.R : c.params.R;
}

inline void validate(const SimConfig& c) {
  if (c.runs < 1) throw ConfigError("runs", "must be >= 1");
  if (c.slots_per_run <= c.warmup) throw ConfigError("slots", "slots_per_run must exceed warmup");
  if (c.field == InterferenceField::extended && !(c.field_radius_factor * c.params.R > c.params.R + c.params.d_A)) {
    throw ConfigError("field_radius_factor", "extended field must reach beyond R + d_A");
  }
  for (int t : c.violation_thresholds) {
    if (t < 0) throw ConfigError("violation_thresholds", "thresholds must be >= 0");
  }
}

/// Across-run summary of one metric.
struct Estimate {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std_dev = 0.0;
  double half_width = 0.0;  // 95% Student-t
  std::size_t samples = 0;
};

inline Estimate summarize(const std::vector<double>& values) {
  Estimate e;
  double sum = 0.0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    sum += v;
    ++e.samples;
  }
  if (e.samples == 0) return e;
  e.mean = sum / static_cast<double>(e.samples);
  if (e.samples < 2) return e;
  double ss = 0.0;
  for (double v : values) {
    if (!std::isnan(v)) ss += (v - e.mean) * (v - e.mean);
  }
  const auto n = static_cast<double>(e.samples);
  e.std_dev = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  e.half_width = boost::math::quantile(dist, 0.975) * e.std_dev / std::sqrt(n);
  return e;
}

struct SimEstimate {
  Estimate s_A;        // decoded tagged updates per slot
  Estimate s_D;        // T_D successes per busy slot
  Estimate aoi_avg;    // time-average tagged AoI
  Estimate delay_avg;  // delivery slot - arrival slot + 1
  Estimate q_avg;      // time-average Q at slot start
  Estimate pr_empty;
  Estimate pr_mid;
  Estimate pr_high;
  Estimate queue_time;    // slots a packet spends counted in Q (delay - 1)
  Estimate arrival_rate;  // measured arrivals per slot
  std::vector<int> violation_thresholds;
  std::vector<Estimate> violation;  // Pr(AoI > c), aligned with thresholds
  std::size_t runs = 0;
  std::size_t slots_per_run = 0;
  std::size_t warmup = 0;
  std::uint64_t seed = 0;
  std::size_t delivered_packets = 0;
};

/// One slot of a traced run.
struct SlotTrace {
  std::size_t slot = 0;
  std::size_t queue = 0;         // Q at slot start
  std::size_t active_count = 0;  // active transmitters, T_D included
  std::uint64_t tagged_aoi = 0;  // AoI at slot end
  bool td_decode = false;
  bool tagged_decode = false;
};

using TraceSink = std::function<void(const SlotTrace&)>;

namespace detail {

struct RunTotals {
  std::size_t slots = 0;
  std::size_t tagged_success = 0;
  std::size_t busy_slots = 0;
  std::size_t td_success = 0;
  double aoi_sum = 0.0;
  std::vector<std::size_t> exceed;
  double q_sum = 0.0;
  std::size_t empty = 0, mid = 0, high = 0;
  std::size_t arrivals = 0;
  double delay_sum = 0.0;
  std::size_t delivered = 0;
};

// Interference from the T_AoI population other than the tagged pair.
class InterfererField {
 public:
  template <class G>
  InterfererField(const SimConfig& c, Point tagged_rx, G& g)
      : params_(c.params), mode_(c.layout), radius_(field_radius(c)) {
    if (c.field == InterferenceField::extended) {
      tail_td_ = far_field_gain(params_.alpha, radius_, 0.0);
      tail_tagged_ = far_field_gain(params_.alpha, radius_, std::hypot(tagged_rx.x, tagged_rx.y));
    }
    if (mode_ == LayoutMode::per_run) {
      const double mean = params_.lambda_A * std::numbers::pi * radius_ * radius_;
      const auto n = static_cast<std::size_t>(poisson(g, mean));
      nodes_.reserve(n);
      for (std::size_t i = 0; i < n; ++i) nodes_.push_back(uniform_in_disc(g, radius_));
    }
  }

  // Adds interference at the tagged receiver and/or the T_D receiver
  // (origin) when each T_AoI node is active w.p. `access`. Returns the
  // number of active field nodes.
  template <class G>
  std::size_t accumulate(G& g, double access, bool at_tagged, bool at_td, Point tagged_rx, double& i_tagged,
                         double& i_td) const {
    if (access <= 0.0) return 0;
    std::size_t active = 0;
    const double alpha = params_.alpha;
    auto add = [&](Point x) {
      ++active;
      if (at_tagged) i_tagged += params_.P2 * exponential1(g) * path_gain_sq(squared_distance(x, tagged_rx), alpha);
      if (at_td) i_td += params_.P2 * exponential1(g) * path_gain_sq(x.x * x.x + x.y * x.y, alpha);
    };
    if (mode_ == LayoutMode::per_slot) {
      const double mean = access * params_.lambda_A * std::numbers::pi * radius_ * radius_;
      const auto n = poisson(g, mean);
      for (std::uint64_t k = 0; k < n; ++k) add(uniform_in_disc(g, radius_));
    } else {
      for (const Point& x : nodes_) {
        if (bernoulli(g, access)) add(x);
      }
    }
    const double tail_scale = access * params_.lambda_A * params_.P2;
    if (at_tagged) i_tagged += tail_scale * tail_tagged_;
    if (at_td) i_td += tail_scale * tail_td_;
    return active;
  }

 private:
  NetworkParams params_;
  LayoutMode mode_;
  double radius_;
  double tail_td_ = 0.0;
  double tail_tagged_ = 0.0;
  std::vector<Point> nodes_;
};

inline RunTotals simulate_run(const SimConfig& c, std::size_t run_index, const TraceSink* trace) {
  const NetworkParams& p = c.params;
  Engine g = make_stream(c.master_seed, run_index);

  const Point tagged_tx = c.tagged_pair.kind == TaggedPairPolicy::Kind::fixed_position
                              ? c.tagged_pair.position
                              : uniform_in_disc(g, p.R);
  const Point tagged_rx = offset_uniform_direction(g, tagged_tx, p.d_A);
  const Point td_tx{p.d_D0, 0.0};
  const InterfererField field(c, tagged_rx, g);

  const double alpha = p.alpha;
  const double tagged_signal = p.P2 * std::pow(p.d_A, -alpha);
  const double td_signal = p.P1 * std::pow(p.d_D, -alpha);
  const double td_to_tagged = path_gain_sq(squared_distance(td_tx, tagged_rx), alpha);
  const double tagged_to_td = path_gain_sq(tagged_tx.x * tagged_tx.x + tagged_tx.y * tagged_tx.y, alpha);
  const auto M = static_cast<std::size_t>(p.M);

  RunTotals tot;
  tot.exceed.assign(c.violation_thresholds.size(), 0);
  std::deque<std::size_t> queue;  // arrival slot of each waiting packet
  std::uint64_t aoi = 1;

  for (std::size_t t = 0; t < c.slots_per_run; ++t) {
    const bool measuring = t >= c.warmup;
    const std::size_t q = queue.size();
    const double access = q == 0 ? p.p1 : (q <= M ? p.p2 : 0.0);
    const bool td_active = q > 0;
    const bool tagged_active = access > 0.0 && bernoulli(g, access);

    bool td_ok = false;
    bool tagged_ok = false;
    std::size_t active = 0;
    if (td_active || tagged_active) {
      double i_tagged = 0.0;
      double i_td = 0.0;
      active = field.accumulate(g, access, tagged_active, td_active, tagged_rx, i_tagged, i_td);
      if (td_active && tagged_active) {
        i_tagged += p.P1 * exponential1(g) * td_to_tagged;
        i_td += p.P2 * exponential1(g) * tagged_to_td;
      }
      if (tagged_active) tagged_ok = tagged_signal * exponential1(g) > p.beta * (p.sigma2 + i_tagged);
      if (td_active) td_ok = td_signal * exponential1(g) > p.beta * (p.sigma2 + i_td);
      active += static_cast<std::size_t>(td_active) + static_cast<std::size_t>(tagged_active);
    }

    if (td_ok) {
      const std::size_t arrived = queue.front();
      queue.pop_front();
      if (measuring && arrived >= c.warmup) {
        tot.delay_sum += static_cast<double>(t - arrived + 1);
        ++tot.delivered;
      }
    }
    const bool arrival = bernoulli(g, p.lambda_D);
    if (arrival) queue.push_back(t);
    aoi = tagged_ok ? 1 : aoi + 1;

    if (measuring) {
      ++tot.slots;
      tot.q_sum += static_cast<double>(q);
      if (q == 0) {
        ++tot.empty;
      } else if (q <= M) {
        ++tot.mid;
      } else {
        ++tot.high;
      }
      if (td_active) {
        ++tot.busy_slots;
        if (td_ok) ++tot.td_success;
      }
      if (tagged_ok) ++tot.tagged_success;
      if (arrival) ++tot.arrivals;
      tot.aoi_sum += static_cast<double>(aoi);
      for (std::size_t k = 0; k < c.violation_thresholds.size(); ++k) {
        if (aoi > static_cast<std::uint64_t>(c.violation_thresholds[k])) ++tot.exceed[k];
      }
    }
    if (trace) (*trace)(SlotTrace{t, q, active, aoi, td_ok, tagged_ok});
  }
  return tot;
}

}  // namespace detail

/// Runs `config.runs` independent replications and summarizes them.
/// Results depend only on the config (not on `workers`); an optional sink
/// receives every slot of run `trace_run`.
inline SimEstimate run(const SimConfig& config, std::optional<std::size_t> trace_run = std::nullopt,
                       const TraceSink& sink = {}) {
  validate(config);
  std::vector<detail::RunTotals> totals(config.runs);
  parallel_for(config.runs, config.workers, [&](std::size_t r) {
    const TraceSink* trace = (trace_run && *trace_run == r && sink) ? &sink : nullptr;
    totals[r] = detail::simulate_run(config, r, trace);
  });

  const std::size_t n = config.runs;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> sa(n), sd(n), aoi(n), delay(n), q(n), pe(n), pm(n), ph(n), qt(n), ar(n);
  std::vector<std::vector<double>> viol(config.violation_thresholds.size(), std::vector<double>(n));
  SimEstimate est;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& t = totals[r];
    const auto slots = static_cast<double>(t.slots);
    sa[r] = static_cast<double>(t.tagged_success) / slots;
    sd[r] = t.busy_slots ? static_cast<double>(t.td_success) / static_cast<double>(t.busy_slots) : nan;
    aoi[r] = t.aoi_sum / slots;
    delay[r] = t.delivered ? t.delay_sum / static_cast<double>(t.delivered) : nan;
    qt[r] = t.delivered ? t.delay_sum / static_cast<double>(t.delivered) - 1.0 : nan;
    q[r] = t.q_sum / slots;
    pe[r] = static_cast<double>(t.empty) / slots;
    pm[r] = static_cast<double>(t.mid) / slots;
    ph[r] = static_cast<double>(t.high) / slots;
    ar[r] = static_cast<double>(t.arrivals) / slots;
    for (std::size_t k = 0; k < viol.size(); ++k) viol[k][r] = static_cast<double>(t.exceed[k]) / slots;
    est.delivered_packets += t.delivered;
  }
  est.s_A = summarize(sa);
  est.s_D = summarize(sd);
  est.aoi_avg = summarize(aoi);
  est.delay_avg = summarize(delay);
  est.q_avg = summarize(q);
  est.pr_empty = summarize(pe);
  est.pr_mid = summarize(pm);
  est.pr_high = summarize(ph);
  est.queue_time = summarize(qt);
  est.arrival_rate = summarize(ar);
  est.violation_thresholds = config.violation_thresholds;
  for (const auto& v : viol) est.violation.push_back(summarize(v));
  est.runs = n;
  est.slots_per_run = config.slots_per_run;
  est.warmup = config.warmup;
  est.seed = config.master_seed;
  return est;
}

// ---------------------------------------------------------------------------
// Decode-probability oracle

enum class QueueRegime { empty, mid, high };

inline const char* to_string(QueueRegime r) {
  switch (r) {
    case QueueRegime::empty: return "Q0";
    case QueueRegime::mid: return "mid";
    case QueueRegime::high: return "high";
  }
  return "?";
}

struct ProbEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t successes = 0;
  std::size_t trials = 0;
};

/// Decode frequencies measured with the queue regime forced. Only the
/// probabilities defined for the regime are set.
struct DecodeEstimate {
  QueueRegime regime = QueueRegime::empty;
  std::optional<ProbEstimate> p_A0, p_D1, p_A1, p_D0;
};

inline ProbEstimate make_prob_estimate(std::size_t successes, std::size_t trials) {
  ProbEstimate e;
  e.successes = successes;
  e.trials = trials;
  e.value = static_cast<double>(successes) / static_cast<double>(trials);
  e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(trials));
  return e;
}

/// Monte-Carlo estimate of the conditional decode probabilities. Each trial
/// draws a fresh interferer field (layout mode is ignored) with Rayleigh
/// fades. The tagged receiver is uniform in the region disc and the T_D
/// transmitter sits at (d_D0, 0). T_D decodes are judged against the field
/// alone, matching the PPP seen by the T_D receiver.
inline DecodeEstimate estimate_decode_probs(const SimConfig& config, QueueRegime regime, std::size_t trials) {
  const NetworkParams& p = config.params;
  if (trials < 10'000) throw ConfigError("trials", "decode oracle needs at least 10^4 trials");
  if (config.field == InterferenceField::extended && !(config.field_radius_factor > 1.0)) {
    throw ConfigError("field_radius_factor", "extended field must reach beyond R");
  }
  constexpr std::size_t kChunk = 1 << 16;
  const std::size_t chunks = (trials + kChunk - 1) / kChunk;
  const double radius = field_radius(config);
  const bool extended = config.field == InterferenceField::extended;
  const double access = regime == QueueRegime::empty ? p.p1 : (regime == QueueRegime::mid ? p.p2 : 0.0);
  const double field_mean = access * p.lambda_A * std::numbers::pi * radius * radius;
  const double tail_scale = access * p.lambda_A * p.P2;
  const double tail_td = extended ? far_field_gain(p.alpha, radius, 0.0) : 0.0;
  const double tagged_signal = p.P2 * std::pow(p.d_A, -p.alpha);
  const double td_signal = p.P1 * std::pow(p.d_D, -p.alpha);
  const Point td_tx{p.d_D0, 0.0};

  struct Counts {
    std::size_t tagged = 0, td = 0, n = 0;
  };
  std::vector<Counts> counts(chunks);
  parallel_for(chunks, config.workers, [&](std::size_t chunk) {
    Engine g = make_stream(config.master_seed ^ 0xdec0de5eedULL, chunk);
    const std::size_t begin = chunk * kChunk;
    const std::size_t end = std::min(trials, begin + kChunk);
    Counts& cnt = counts[chunk];
    for (std::size_t i = begin; i < end; ++i) {
      ++cnt.n;
      if (regime == QueueRegime::high) {
        if (td_signal * exponential1(g) > p.beta * p.sigma2) ++cnt.td;
        continue;
      }
      const Point rx = uniform_in_disc(g, p.R);
      double i_tagged = 0.0;
      double i_td = 0.0;
      const auto n = poisson(g, field_mean);
      const bool need_td = regime == QueueRegime::mid;
      for (std::uint64_t k = 0; k < n; ++k) {
        const Point x = uniform_in_disc(g, radius);
        i_tagged += p.P2 * exponential1(g) * path_gain_sq(squared_distance(x, rx), p.alpha);
        if (need_td) i_td += p.P2 * exponential1(g) * path_gain_sq(x.x * x.x + x.y * x.y, p.alpha);
      }
      if (extended) {
        i_tagged += tail_scale * far_field_gain(p.alpha, radius, std::hypot(rx.x, rx.y));
        i_td += tail_scale * tail_td;
      }
      if (need_td) {
        i_tagged += p.P1 * exponential1(g) * path_gain_sq(squared_distance(td_tx, rx), p.alpha);
        if (td_signal * exponential1(g) > p.beta * (p.sigma2 + i_td)) ++cnt.td;
      }
      if (tagged_signal * exponential1(g) > p.beta * (p.sigma2 + i_tagged)) ++cnt.tagged;
    }
  });

  Counts total;
  for (const auto& c : counts) {
    total.tagged += c.tagged;
    total.td += c.td;
    total.n += c.n;
  }
  DecodeEstimate out;
  out.regime = regime;
  switch (regime) {
    case QueueRegime::empty: out.p_A0 = make_prob_estimate(total.tagged, total.n); break;
    case QueueRegime::mid:
      out.p_A1 = make_prob_estimate(total.tagged, total.n);
      out.p_D1 = make_prob_estimate(total.td, total.n);
      break;
    case QueueRegime::high: out.p_D0 = make_prob_estimate(total.td, total.n); break;
  }
  return out;
}

}  // namespace aoid2d
