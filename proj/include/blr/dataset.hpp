#pragma once
#include "blr/errors.hpp"
#include "blr/types.hpp"

namespace blr {

/// Observations: x is N x d (inputs as supplied), y is length N.
struct Dataset {
  Matrix x;
  Vector y;

  int n() const { return static_cast<int>(x.rows()); }
  int d() const { return static_cast<int>(x.cols()); }
};

/// Throws DataError unless N >= 1, x/y row counts agree, and all entries are
/// finite.
void validate(const Dataset& data);

}  // namespace blr
