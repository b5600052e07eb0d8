#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace lonctl {

/// Invalid configuration value or structure. `key()` holds the dotted path
/// of the offending entry (e.g. "vehicle.mass_kg"), empty when not tied to a key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Requested motor torque cannot be produced at the current shaft speed
/// (at or beyond synchronous speed).
class UnachievableTorque : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A simulated quantity became NaN or infinite.
class NonFiniteState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw NonFiniteState(std::string("non-finite ") + what);
  }
}

inline void require(bool cond, const std::string& key, const char* what) {
  if (!cond) throw ConfigError(key, what);
}

}  // namespace detail
}  // namespace lonctl
