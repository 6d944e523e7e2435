#include "blr/basis.hpp"

#include <cmath>

namespace blr {

double basis_value(BasisFamily family, const MultiIndex& alpha,
                   const ConstVectorRef& x) {
  if (alpha.dim() != x.size())
    throw DimensionMismatch("point dimension does not match multi-index");
  double v = 1.0;
  for (int i = 0; i < alpha.dim(); ++i) {
    if (alpha[i] == 0) continue;  // phi_0 == 1
    v *= univariate_value(family, alpha[i], x[i]);
  }
  return v;
}

Matrix evaluate_design_values(const ConstMatrixRef& x, const IndexSet& set) {
  const int n = static_cast<int>(x.rows());
  const int p = set.size();
  if (p > 0 && set.dim() != x.cols())
    throw DimensionMismatch("input dimension " + std::to_string(x.cols()) +
                            " does not match multi-index dimension " +
                            std::to_string(set.dim()));
  if (!x.allFinite()) throw DataError("design input contains non-finite values");

  Matrix psi(n, p);
  for (int j = 0; j < p; ++j) {
    const MultiIndex& alpha = set[j];
    for (int r = 0; r < n; ++r) {
      double v = 1.0;
      for (int i = 0; i < alpha.dim(); ++i) {
        if (alpha[i] == 0) continue;
        v *= univariate_value(set.family(), alpha[i], x(r, i));
      }
      psi(r, j) = v;
    }
  }
  return psi;
}

DesignMatrix evaluate_design(const Dataset& data, const IndexSet& set) {
  validate(data);
  return DesignMatrix{evaluate_design_values(data.x, set), set};
}

}  // namespace blr
