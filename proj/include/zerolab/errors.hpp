#pragma once

#include <stdexcept>
#include <string>

namespace zerolab {

/// Invalid input: out-of-range parameters, malformed configuration, unknown keys.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not reach its accuracy target or produced non-finite values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation at a pole of a meromorphic function (e.g. Gamma at 0, -1, -2, ...).
class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace zerolab
