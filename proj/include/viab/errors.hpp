#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace viab {

/// Malformed or inconsistent run configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested time step exceeds the monotonicity bound of the explicit scheme.
class CflError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Non-finite values appeared during a solve. Maps to CLI exit code 4.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Interpolation query outside the closed grid box.
class OutOfDomain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace viab
