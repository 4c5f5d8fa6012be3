#pragma once

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "aoid2d/channel.hpp"
#include "aoid2d/errors.hpp"
#include "aoid2d/optimizer.hpp"
#include "aoid2d/params.hpp"

namespace aoid2d {

// Config documents are flat JSON objects. Units follow the evaluation table:
//   beta [dB], sigma2 [dBm], P1 / P2 / P_max [mW], distances [m],
//   lambda_A [1/m^2], D_max [slots]; everything else dimensionless.
// lambda_D, M, p2 and P2 have no default and must be present. p1 defaults
// to p1*, d_D0 to d_D, every other key to its evaluation-table value.

using Json = nlohmann::json;

inline constexpr std::string_view kEnvPrefix = "AOID2D_";

enum class KeyUnit { plain, db, dbm, mw };

struct ConfigKey {
  std::string_view name;
  KeyUnit unit;
  bool required;
};

inline constexpr ConfigKey kConfigKeys[] = {
    {"lambda_A", KeyUnit::plain, false}, {"lambda_D", KeyUnit::plain, true}, {"d_D", KeyUnit::plain, false},
    {"d_A", KeyUnit::plain, false},      {"d_D0", KeyUnit::plain, false},    {"R", KeyUnit::plain, false},
    {"alpha", KeyUnit::plain, false},    {"beta", KeyUnit::db, false},       {"sigma2", KeyUnit::dbm, false},
    {"P1", KeyUnit::mw, false},          {"P2", KeyUnit::mw, true},          {"P_max", KeyUnit::mw, false},
    {"p1", KeyUnit::plain, false},       {"p2", KeyUnit::plain, true},       {"M", KeyUnit::plain, true},
    {"D_max", KeyUnit::plain, false},
};

inline const ConfigKey* find_key(std::string_view name) {
  for (const auto& k : kConfigKeys) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

/// Evaluation-table constants at the default operating point, p1 = p1*.
inline NetworkParams table1() {
  NetworkParams p;
  p.p1 = p1_star(p);
  return p;
}

namespace detail {

inline double* field_of(NetworkParams& p, std::string_view key) {
  if (key == "lambda_A") return &p.lambda_A;
  if (key == "lambda_D") return &p.lambda_D;
  if (key == "d_D") return &p.d_D;
  if (key == "d_A") return &p.d_A;
  if (key == "d_D0") return &p.d_D0;
  if (key == "R") return &p.R;
  if (key == "alpha") return &p.alpha;
  if (key == "beta") return &p.beta;
  if (key == "sigma2") return &p.sigma2;
  if (key == "P1") return &p.P1;
  if (key == "P2") return &p.P2;
  if (key == "P_max") return &p.P_max;
  if (key == "p1") return &p.p1;
  if (key == "p2") return &p.p2;
  if (key == "D_max") return &p.D_max;
  return nullptr;
}

inline double to_si(KeyUnit u, double v) {
  switch (u) {
    case KeyUnit::db: return db_to_linear(v);
    case KeyUnit::dbm: return dbm_to_watts(v);
    case KeyUnit::mw: return mw_to_watts(v);
    case KeyUnit::plain: return v;
  }
  return v;
}

inline double from_si(KeyUnit u, double v) {
  switch (u) {
    case KeyUnit::db: return linear_to_db(v);
    case KeyUnit::dbm: return watts_to_dbm(v);
    case KeyUnit::mw: return watts_to_mw(v);
    case KeyUnit::plain: return v;
  }
  return v;
}

inline std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline void check_positive(std::string_view key, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(key), "must be a positive finite number");
}

}  // namespace detail

/// Converts a config document into SI parameters. Errors name the key.
inline NetworkParams from_config(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("<document>", "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!find_key(key)) throw ConfigError(key, "unknown key");
  }

  NetworkParams p = table1();
  bool have_p1 = false;
  bool have_d_D0 = false;
  for (const auto& k : kConfigKeys) {
    const std::string key(k.name);
    const auto it = doc.find(key);
    if (it == doc.end()) {
      if (k.required) throw ConfigError(key, "missing required key");
      continue;
    }
    if (!it->is_number()) throw ConfigError(key, "expected a number, got " + it->dump());
    const double raw = it->get<double>();
    if (!std::isfinite(raw)) throw ConfigError(key, "must be finite");
    if (key == "M") {
      if (raw != std::floor(raw) || raw < 1.0 || raw > 1e6) throw ConfigError(key, "must be an integer >= 1");
      p.M = static_cast<int>(raw);
      continue;
    }
    const double v = detail::to_si(k.unit, raw);
    *detail::field_of(p, k.name) = v;
    if (key == "p1") have_p1 = true;
    if (key == "d_D0") have_d_D0 = true;
  }

  for (std::string_view key : {"lambda_A", "d_D", "d_A", "R", "P1", "P2", "P_max", "beta", "sigma2", "D_max"}) {
    detail::check_positive(key, *detail::field_of(p, key));
  }
  if (!(p.d_D0 >= 0.0)) throw ConfigError("d_D0", "must be >= 0");
  if (!(p.alpha > 2.0)) throw ConfigError("alpha", "path-loss exponent must exceed 2");
  if (!(p.lambda_D > 0.0 && p.lambda_D < 1.0)) throw ConfigError("lambda_D", "must lie in (0, 1)");
  if (!(p.p2 > 0.0 && p.p2 <= 1.0)) throw ConfigError("p2", "must lie in (0, 1]");
  if (!have_d_D0) p.d_D0 = p.d_D;
  if (!have_p1) p.p1 = p1_star(p);
  if (!(p.p1 > 0.0 && p.p1 <= 1.0)) throw ConfigError("p1", "must lie in (0, 1]");
  return p;
}

/// Inverse of from_config; every key is written explicitly.
inline Json to_config(const NetworkParams& p) {
  Json doc = Json::object();
  NetworkParams copy = p;
  for (const auto& k : kConfigKeys) {
    const std::string key(k.name);
    if (key == "M") {
      doc[key] = p.M;
    } else {
      doc[key] = detail::from_si(k.unit, *detail::field_of(copy, k.name));
    }
  }
  return doc;
}

/// Overwrites keys from AOID2D_<key> environment variables (exact key case).
inline Json apply_env_overrides(Json doc) {
  for (const auto& k : kConfigKeys) {
    const std::string var = std::string(kEnvPrefix) + std::string(k.name);
    const char* raw = std::getenv(var.c_str());
    if (!raw) continue;
    const auto v = detail::parse_double(raw);
    if (!v) throw ConfigError(std::string(k.name), "environment override " + var + " is not a number: '" + raw + "'");
    doc[std::string(k.name)] = *v;
  }
  return doc;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError(path, std::string("parse failure: ") + e.what());
  }
}

inline NetworkParams load_config(const std::string& path, bool env_overrides = true) {
  Json doc = read_json_file(path);
  if (env_overrides) doc = apply_env_overrides(std::move(doc));
  return from_config(doc);
}

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
};

/// Range and stability checks. Never throws.
inline ValidationReport validate(const NetworkParams& p) {
  ValidationReport r;
  auto positive = [&](const char* name, double v) {
    if (!(v > 0.0)) r.violations.push_back(std::string(name) + " must be > 0");
  };
  positive("lambda_A", p.lambda_A);
  positive("d_D", p.d_D);
  positive("d_A", p.d_A);
  positive("R", p.R);
  positive("beta", p.beta);
  positive("sigma2", p.sigma2);
  positive("P1", p.P1);
  positive("P2", p.P2);
  positive("P_max", p.P_max);
  positive("D_max", p.D_max);
  if (!(p.d_D0 >= 0.0)) r.violations.push_back("d_D0 must be >= 0");
  if (!(p.alpha > 2.0)) r.violations.push_back("alpha must exceed 2");
  if (!(p.lambda_D > 0.0 && p.lambda_D < 1.0)) r.violations.push_back("lambda_D must lie in (0, 1)");
  if (!(p.p1 > 0.0 && p.p1 <= 1.0)) r.violations.push_back("p1 must lie in (0, 1]");
  if (!(p.p2 > 0.0 && p.p2 <= 1.0)) r.violations.push_back("p2 must lie in (0, 1]");
  if (p.M < 1) r.violations.push_back("M must be >= 1");
  if (p.P2 > p.P_max) r.warnings.push_back("P2 exceeds P_max");
  if (p.p2 >= p.p1) r.warnings.push_back("p2 >= p1: the protocol assumes p2 < p1");
  if (p.d_D > 0.0 && p.P1 > 0.0 && p.alpha > 0.0) {
    const double pd0 = decode_prob_d0(p);
    if (!(p.lambda_D < pd0)) {
      r.violations.push_back("unstable queue: stability requires lambda_D < p_D0 (lambda_D = " +
                             std::to_string(p.lambda_D) + ", p_D0 = " + std::to_string(pd0) + ")");
    }
  }
  return r;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t config_hash(const NetworkParams& p) { return fnv1a(to_config(p).dump()); }

}  // namespace aoid2d
