#pragma once
#include "blr/dataset.hpp"
#include "blr/multi_index.hpp"
#include "blr/types.hpp"

namespace blr {

/// phi_0 == 1 for every family, so a tensor-product term is independent of
/// the inputs whose exponent is zero.

template <typename Scalar>
Scalar monomial_value(int degree, Scalar x) {
  Scalar v = Scalar(1);
  for (int k = 0; k < degree; ++k) v *= x;
  return v;
}

/// Legendre P_k on [-1,1] via the Bonnet recurrence
/// (k+1) P_{k+1}(x) = (2k+1) x P_k(x) - k P_{k-1}(x).
template <typename Scalar>
Scalar legendre_value(int degree, Scalar x) {
  if (degree == 0) return Scalar(1);
  Scalar prev = Scalar(1);
  Scalar cur = x;
  for (int k = 1; k < degree; ++k) {
    const Scalar next =
        (Scalar(2 * k + 1) * x * cur - Scalar(k) * prev) / Scalar(k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Probabilists' Hermite He_k: He_{k+1}(x) = x He_k(x) - k He_{k-1}(x).
template <typename Scalar>
Scalar hermite_value(int degree, Scalar x) {
  if (degree == 0) return Scalar(1);
  Scalar prev = Scalar(1);
  Scalar cur = x;
  for (int k = 1; k < degree; ++k) {
    const Scalar next = x * cur - Scalar(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

template <typename Scalar>
Scalar univariate_value(BasisFamily family, int degree, Scalar x) {
  switch (family) {
    case BasisFamily::monomial: return monomial_value(degree, x);
    case BasisFamily::legendre: return legendre_value(degree, x);
    case BasisFamily::hermite: return hermite_value(degree, x);
  }
  throw InvalidArgument("unknown basis family");
}

/// psi_alpha(x) = prod_i phi_{alpha_i}(x_i) at a single point.
double basis_value(BasisFamily family, const MultiIndex& alpha,
                   const ConstVectorRef& x);

/// Basis evaluations at the data points: column j holds psi_{indices[j]}.
struct DesignMatrix {
  Matrix values;  // N x P
  IndexSet index_set;

  int n() const { return static_cast<int>(values.rows()); }
  int p() const { return static_cast<int>(values.cols()); }
};

/// Core evaluation on a raw input matrix (rows are points).
Matrix evaluate_design_values(const ConstMatrixRef& x, const IndexSet& set);

DesignMatrix evaluate_design(const Dataset& data, const IndexSet& set);

}  // namespace blr
