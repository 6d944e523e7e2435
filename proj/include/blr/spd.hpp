#pragma once
#include <Eigen/Cholesky>

#include "blr/errors.hpp"
#include "blr/types.hpp"

namespace blr {

/// The single record of numeric knobs the solvers honour.
struct NumericPolicy {
  /// Retry jitter (and pivot floor) = jitter_scale * trace(M)/n.
  double jitter_scale = 1e-10;
  /// Laplace-MAP sign-iteration budget = sign_budget_factor * P solves.
  int sign_budget_factor = 4;
};

/// Symmetric matrix storage. Construction symmetrizes; positive definiteness
/// is established by factor().
class SpdMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(const ConstMatrixRef& m);

  static SpdMatrix identity(int n);
  static SpdMatrix from_diagonal(const ConstVectorRef& diag);

  const Matrix& values() const { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }

 private:
  Matrix m_;
};

/// Lower Cholesky factor with cached log-determinant. Immutable once built;
/// concurrent solves against the same factor are safe.
class SpdFactor {
 public:
  /// M^{-1} rhs.
  Matrix solve(const ConstMatrixRef& rhs) const;
  /// L^{-1} rhs where M = L L^t (whitening transform).
  Matrix forward_solve(const ConstMatrixRef& rhs) const;
  /// ln |M| from the factor diagonal.
  double log_det() const { return log_det_; }
  /// Materialized M^{-1}; used only where a covariance must be reported.
  Matrix inverse() const;

  bool jittered() const { return jittered_; }
  int size() const { return static_cast<int>(llt_.matrixLLT().rows()); }

 private:
  friend SpdFactor factor(const SpdMatrix&, const NumericPolicy&);
  Eigen::LLT<Matrix> llt_;
  double log_det_ = 0.0;
  bool jittered_ = false;
};

/// Cholesky-factorizes m. On a pivot at or below the floor, retries once with
/// jitter_scale*trace/n added to the diagonal (the result is flagged); a
/// second failure throws NotPositiveDefinite.
SpdFactor factor(const SpdMatrix& m, const NumericPolicy& policy = {});

inline double log_det(const SpdFactor& f) { return f.log_det(); }
inline Matrix solve(const SpdFactor& f, const ConstMatrixRef& rhs) {
  return f.solve(rhs);
}

}  // namespace blr
