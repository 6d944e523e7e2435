#pragma once
#include <optional>
#include <string>
#include <vector>

#include "blr/basis.hpp"
#include "blr/noise.hpp"
#include "blr/prior.hpp"

namespace blr {

/// Warning tokens carried by summaries and reports.
namespace warning {
inline constexpr const char* kJitteredNormalEquations = "jittered-normal-equations";
inline constexpr const char* kZeroResidual = "zero-residual";
inline constexpr const char* kMleOutsideBounds = "mle-outside-bounds";
inline constexpr const char* kNoModelVariance = "no-model-variance";
inline constexpr const char* kNoiseNotTransferable = "noise-not-transferable";
inline constexpr const char* kSkippedReplicates = "skipped-replicates";
}  // namespace warning

/// Posterior of the noise precision 1/sigma^2 given the OLS residuals:
/// Gamma(shape, scale) with mode (shape-1)*scale.
struct GammaParams {
  double shape;  // k
  double scale;  // theta
  double mode() const { return (shape - 1.0) * scale; }
};

/// Gaussian posterior summary produced by every fit. The covariance (and its
/// log-determinant) is absent only for a zero-residual OLS fit, where it
/// would be singular.
struct PosteriorSummary {
  Vector mean;
  std::optional<SpdMatrix> covariance;
  std::optional<double> log_det_cov;
  std::string method;  // "gls" | "ols" | "ridge" | "laplace-map"
  std::optional<double> sigma2_mle;          // ols only
  std::optional<IntVector> sign_vector;      // laplace-map only, entries -1/0/+1
  std::optional<bool> mean_in_bounds;        // gls with a bounded uniform prior
  bool converged = true;
  int iterations = 0;
  std::vector<std::string> warnings;

  int p() const { return static_cast<int>(mean.size()); }
};

/// Generalized least squares under Gaussian likelihood and flat prior:
///   mean = [Psi^t C_M^-1 Psi]^-1 Psi^t C_M^-1 y,  cov = [Psi^t C_M^-1 Psi]^-1.
/// With a bounded uniform prior the summary reports whether the MLE lies in
/// the box; moments are never truncated.
PosteriorSummary fit_gls(const ConstMatrixRef& design, const ConstVectorRef& y,
                         const NoiseModel& noise,
                         const std::optional<UniformPrior>& prior = std::nullopt,
                         const NumericPolicy& policy = {});

/// Ordinary least squares: mean = [Psi^t Psi]^-1 Psi^t y, the noise MLE
/// sigma2 = RSS/N, and cov = sigma2 [Psi^t Psi]^-1.
PosteriorSummary fit_ols(const ConstMatrixRef& design, const ConstVectorRef& y,
                         const NumericPolicy& policy = {});

/// Gamma posterior of the precision from the residual sum of squares.
GammaParams precision_posterior(double residual_ss, int n);

/// Ridge / Gaussian-prior MAP:
///   mean = [Psi^t C_M^-1 Psi + C_aa^-1]^-1 (Psi^t C_M^-1 y + C_aa^-1 a0).
/// N < P is allowed; the prior regularizes.
PosteriorSummary fit_ridge(const ConstMatrixRef& design, const ConstVectorRef& y,
                           const NoiseModel& noise, const GaussianPrior& prior,
                           const NumericPolicy& policy = {});

/// Laplace-prior MAP (LASSO). Fixed-point iteration on s = sgn(a - a0):
///   a = a0 + [Psi^t C_M^-1 Psi]^-1 (Psi^t C_M^-1 (y - Psi a0) - Lambda s),
/// with oscillating coordinates clamped to a0 (zero in the active set) and
/// clamped coordinates re-activated if they violate the subgradient bound.
/// Covariance is [Psi^t C_M^-1 Psi]^-1.
PosteriorSummary fit_laplace_map(const ConstMatrixRef& design,
                                 const ConstVectorRef& y, const NoiseModel& noise,
                                 const LaplacePrior& prior,
                                 const NumericPolicy& policy = {});

/// Multivariate normal density of the posterior at a, in log and linear form.
struct DensityValue {
  double log_density;
  double density;
};

DensityValue posterior_density(const PosteriorSummary& summary,
                               const ConstVectorRef& a,
                               const NumericPolicy& policy = {});

// DesignMatrix conveniences.
inline PosteriorSummary fit_gls(const DesignMatrix& design, const ConstVectorRef& y,
                                const NoiseModel& noise,
                                const std::optional<UniformPrior>& prior = std::nullopt,
                                const NumericPolicy& policy = {}) {
  return fit_gls(ConstMatrixRef(design.values), y, noise, prior, policy);
}
inline PosteriorSummary fit_ols(const DesignMatrix& design, const ConstVectorRef& y,
                                const NumericPolicy& policy = {}) {
  return fit_ols(ConstMatrixRef(design.values), y, policy);
}
inline PosteriorSummary fit_ridge(const DesignMatrix& design, const ConstVectorRef& y,
                                  const NoiseModel& noise, const GaussianPrior& prior,
                                  const NumericPolicy& policy = {}) {
  return fit_ridge(ConstMatrixRef(design.values), y, noise, prior, policy);
}
inline PosteriorSummary fit_laplace_map(const DesignMatrix& design,
                                        const ConstVectorRef& y,
                                        const NoiseModel& noise,
                                        const LaplacePrior& prior,
                                        const NumericPolicy& policy = {}) {
  return fit_laplace_map(ConstMatrixRef(design.values), y, noise, prior, policy);
}

}  // namespace blr
