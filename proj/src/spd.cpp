#include "blr/spd.hpp"

#include <cmath>
#include <string>

namespace blr {

SpdMatrix::SpdMatrix(const ConstMatrixRef& m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("SPD matrix must be square, got " +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  m_ = 0.5 * (m + m.transpose());
}

SpdMatrix SpdMatrix::identity(int n) { return SpdMatrix(Matrix::Identity(n, n)); }

SpdMatrix SpdMatrix::from_diagonal(const ConstVectorRef& diag) {
  return SpdMatrix(Matrix(diag.asDiagonal()));
}

namespace {

// Attempts one LLT; true when it completed with every pivot above the floor.
bool try_factor(const Matrix& m, double pivot_floor, Eigen::LLT<Matrix>& llt) {
  llt.compute(m);
  if (llt.info() != Eigen::Success) return false;
  const auto diag = llt.matrixLLT().diagonal();
  for (int j = 0; j < diag.size(); ++j) {
    const double pivot = diag[j] * diag[j];
    if (!(pivot > pivot_floor)) return false;  // also rejects NaN
  }
  return true;
}

}  // namespace

SpdFactor factor(const SpdMatrix& m, const NumericPolicy& policy) {
  if (!m.values().allFinite())
    throw InvalidArgument("cannot factor a matrix with non-finite entries");

  SpdFactor f;
  const int n = m.size();
  if (n == 0) throw InvalidArgument("cannot factor an empty matrix");

  const double floor = policy.jitter_scale * m.values().trace() / n;
  if (try_factor(m.values(), floor, f.llt_)) {
    f.log_det_ = 2.0 * f.llt_.matrixLLT().diagonal().array().log().sum();
    return f;
  }
  // One jittered retry. A nonpositive trace cannot come from an SPD matrix,
  // so there is nothing to rescue in that case.
  if (floor > 0.0) {
    Matrix jittered = m.values();
    jittered.diagonal().array() += floor;
    if (try_factor(jittered, floor, f.llt_)) {
      f.jittered_ = true;
      f.log_det_ = 2.0 * f.llt_.matrixLLT().diagonal().array().log().sum();
      return f;
    }
  }
  throw NotPositiveDefinite(
      "matrix is not positive definite (pivot at or below the jitter floor "
      "after one jittered retry, n=" + std::to_string(n) + ")");
}

Matrix SpdFactor::solve(const ConstMatrixRef& rhs) const {
  if (rhs.rows() != size())
    throw DimensionMismatch("solve: rhs has " + std::to_string(rhs.rows()) +
                            " rows, factor is " + std::to_string(size()) + "x" +
                            std::to_string(size()));
  return llt_.solve(rhs);
}

Matrix SpdFactor::forward_solve(const ConstMatrixRef& rhs) const {
  if (rhs.rows() != size())
    throw DimensionMismatch("forward_solve: rhs row count mismatch");
  return llt_.matrixL().solve(rhs);
}

Matrix SpdFactor::inverse() const {
  return llt_.solve(Matrix::Identity(size(), size()));
}

}  // namespace blr
