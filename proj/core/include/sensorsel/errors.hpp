#pragma once

#include <stdexcept>
#include <string>

namespace sensorsel {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix holds non-finite entries or has an inconsistent shape.
class InvalidMatrix : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorization hit a non-positive pivot (within tolerance).
/// Callers use this as the feasibility signal for sensor subsets.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// A sensor budget or rank parameter exceeds what the data admits.
class InvalidBudget : public Error {
 public:
  using Error::Error;
};

/// The requested subset violates the positive-definiteness constraint.
class InfeasibleSubset : public Error {
 public:
  using Error::Error;
};

/// Exhaustive search would enumerate too many subsets.
class TooLargeForExhaustive : public Error {
 public:
  using Error::Error;
};

/// No feasible candidate remains for the next greedy step.
class FeasibleSetExhausted : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed (e.g. a quantity that is
/// nonnegative analytically came out meaningfully negative).
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix dimensions do not line up.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A data file could not be parsed; the message carries line/offset context.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An experiment configuration is inconsistent (bad fold counts, etc.).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sensorsel
