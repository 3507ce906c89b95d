#pragma once

#include <stdexcept>
#include <string>

namespace mimosim {

/// Invalid argument or configuration (bad dimensions, out-of-domain values,
/// unsupported code parameters). The CLI maps this to exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the documented domain of a numeric function.
class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Operand shapes do not agree.
class DimensionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Gaussian elimination met a pivot below tolerance.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A detector could not produce a decision (e.g. singular Gram matrix for ZF).
class DetectionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mimosim
