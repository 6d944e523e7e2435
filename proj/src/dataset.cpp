#include "blr/dataset.hpp"

namespace blr {

void validate(const Dataset& data) {
  if (data.x.rows() < 1) throw DataError("dataset must have at least one row");
  if (data.x.rows() != data.y.rows())
    throw DataError("x and y row counts differ");
  if (!data.x.allFinite() || !data.y.allFinite())
    throw DataError("dataset contains non-finite values");
}

}  // namespace blr
