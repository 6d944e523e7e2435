#pragma once
#include <cstdint>
#include <optional>
#include <string>

#include "blr/estimators.hpp"

namespace blr {

enum class FitMethod { gls, ols, ridge, lasso };

const char* method_name(FitMethod m);
FitMethod method_from_name(const std::string& name);

/// Pairs-bootstrap summary of the coefficient sampling distribution.
struct BootstrapSummary {
  int replicates = 0;  // requested
  int completed = 0;   // replicates whose refit succeeded
  int skipped = 0;     // rank-deficient or otherwise failed refits
  Vector coefficient_means;
  Vector coefficient_stddevs;
  std::uint64_t seed = 0;
  std::string rng_algorithm;
};

/// Resamples rows with replacement, refits per replicate, and aggregates
/// per-coefficient mean and standard deviation. Replicate r draws from the
/// substream derive_stream(seed, r), so results are independent of evaluation
/// order; failed refits are skipped and counted.
BootstrapSummary bootstrap_coefficients(const Dataset& data, const IndexSet& set,
                                        const NoiseModel& noise,
                                        const std::optional<PriorSpec>& prior,
                                        FitMethod method, int replicates,
                                        std::uint64_t seed,
                                        const NumericPolicy& policy = {});

/// Predictive mean with the model/noise variance split reported separately.
struct Prediction {
  Vector mean;
  Vector model_variance;  // psi^t C psi per row
  Vector noise_variance;  // from the noise model, zero when absent
};

/// mean = Psi* posterior_mean; model variance is the quadratic form through
/// the posterior covariance. `noise` must apply to the new rows (iid always
/// does; diagonal/full must be sized to them).
Prediction predict(const PosteriorSummary& summary,
                   const ConstMatrixRef& new_design,
                   const std::optional<NoiseModel>& noise = std::nullopt);

}  // namespace blr
