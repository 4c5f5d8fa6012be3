#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace aoid2d {

inline constexpr std::string_view kVersion = "0.1.0";

/// Shortest round-trip decimal form, independent of the global locale.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_hex(std::uint64_t v) {
  char buf[17];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, 16);
  return std::string(buf, res.ptr);
}

/// RFC 4180 field: quoted only when it holds a comma, quote or line break.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvRow {
 public:
  CsvRow& add(std::string_view s) {
    cells_.push_back(csv_field(s));
    return *this;
  }
  CsvRow& add(const char* s) { return add(std::string_view(s)); }
  CsvRow& add(const std::string& s) { return add(std::string_view(s)); }
  CsvRow& add(double v) {
    cells_.push_back(format_double(v));
    return *this;
  }
  CsvRow& add(int v) {
    cells_.push_back(std::to_string(v));
    return *this;
  }
  CsvRow& add(std::size_t v) {
    cells_.push_back(std::to_string(v));
    return *this;
  }
  CsvRow& add(bool v) {
    cells_.emplace_back(v ? "1" : "0");
    return *this;
  }

  void write(std::ostream& os) const {
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (i) os << ',';
      os << cells_[i];
    }
    os << '\n';
  }

 private:
  std::vector<std::string> cells_;
};

inline void write_header(std::ostream& os, const std::vector<std::string>& columns) {
  CsvRow row;
  for (const auto& c : columns) row.add(c);
  row.write(os);
}

/// First line of every output file.
inline void write_provenance(std::ostream& os, std::uint64_t seed, std::uint64_t config_hash) {
  os << "# aoid2d " << kVersion << " seed=" << seed << " config_hash=" << format_hex(config_hash) << '\n';
}

}  // namespace aoid2d
