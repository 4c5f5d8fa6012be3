#pragma once

#include <stdexcept>
#include <string>

namespace aoid2d {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or missing configuration value. key() names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// The model cannot be evaluated for these inputs (unstable queue,
// degenerate service probability, undefined metric).
class ModelError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved_rel_error)
      : Error(what), achieved_(achieved_rel_error) {}

  double achieved_relative_error() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace aoid2d
