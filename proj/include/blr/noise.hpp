#pragma once
#include <optional>
#include <vector>

#include "blr/spd.hpp"

namespace blr {

/// Error covariance C_M. Three shapes: iid sigma^2 I_N, per-row diagonal
/// variances, or a full SPD matrix. The full shape is factored eagerly so an
/// invalid covariance fails at construction.
class NoiseModel {
 public:
  enum class Kind { iid, diagonal, full };

  static NoiseModel iid(double sigma2);
  static NoiseModel diagonal(Vector variances);
  static NoiseModel full(SpdMatrix c, const NumericPolicy& policy = {});

  Kind kind() const { return kind_; }
  /// Row count the model is pinned to; empty for iid (fits any N).
  std::optional<int> rows() const;

  double sigma2() const;            // iid only
  const Vector& variances() const;  // diagonal only
  const SpdMatrix& covariance() const;  // full only

  /// ln |C_M| for an N-row dataset.
  double log_det(int n) const;
  /// L^{-1} v where C_M = L L^t; whitened residuals have unit covariance.
  Matrix whiten(const ConstMatrixRef& v) const;
  /// C_M^{-1} v.
  Matrix apply_inverse(const ConstMatrixRef& v) const;
  /// Noise model for the resampled rows idx (repetitions allowed).
  NoiseModel resample(const std::vector<int>& idx) const;
  /// Marginal variance of row i (diagonal entry of C_M).
  double row_variance(int i) const;

 private:
  NoiseModel() = default;
  void check_rows(Eigen::Index n) const;

  Kind kind_ = Kind::iid;
  double sigma2_ = 1.0;
  Vector variances_;
  SpdMatrix cov_;
  std::optional<SpdFactor> factor_;
};

inline Matrix whiten(const NoiseModel& noise, const ConstMatrixRef& v) {
  return noise.whiten(v);
}

}  // namespace blr
