#pragma once

#include <stdexcept>
#include <string>

namespace qtj {

/// Bad user input: invalid field parameters, degree preconditions, malformed
/// configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A result would depend on coefficients below the retained precision floor.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical law that must hold (error law, oracle equality, ...) failed.
/// Always a bug in the kernel, never bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qtj
