#pragma once
#include <stdexcept>
#include <string>
#include <utility>

namespace blr {

/// Base class of every exception the library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operand shapes disagree.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// A Cholesky pivot fell at or below the jitter floor, even after one
/// jittered retry. Signals singular or ill-posed normal equations.
struct NotPositiveDefinite : Error {
  using Error::Error;
};

/// The Laplace-MAP sign iteration kept cycling after clamping.
struct NoSignFixedPoint : Error {
  NoSignFixedPoint(const std::string& msg, std::string trace)
      : Error(msg), trace(std::move(trace)) {}
  std::string trace;  // per-iteration sign vectors, for the report
};

/// Malformed input file or configuration.
struct DataError : Error {
  using Error::Error;
};

/// Argument values violate a precondition (bad policy parameters,
/// incompatible method/prior combinations, ...).
struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace blr
