#pragma once

#include <stdexcept>
#include <string>

namespace catline {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Fock dimension below the minimum (dim < 2).
class InvalidDimensionError : public Error {
 public:
  using Error::Error;
};

/// Operands whose space layouts do not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Requested truncation dimension violates the sizing rule for the
/// given amplitude. Refusal, not silent degradation.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// State construction that is degenerate (e.g. odd cat at alpha = 0).
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

/// A density matrix failing its invariants (hermiticity, trace, positivity).
class StateValidationError : public Error {
 public:
  using Error::Error;
};

/// Time step too large for the stability guard dt * ||H|| <= 0.1.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure mid-run (positivity or trace breach).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Configuration parse or validation failure.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace catline
