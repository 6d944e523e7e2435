#pragma once
#include <optional>
#include <variant>

#include "blr/spd.hpp"

namespace blr {

/// Rectangular-box prior. Without bounds it is the flat prior; with bounds the
/// GLS fit reports whether the MLE lies inside the box (moments are never
/// truncated).
struct UniformPrior {
  std::optional<Vector> lower;
  std::optional<Vector> upper;
  bool has_bounds() const { return lower.has_value(); }
};

/// Gaussian prior N(a0, C_aa).
struct GaussianPrior {
  Vector mean;    // a0
  SpdMatrix cov;  // C_aa
};

/// Laplace prior with density prod_i (rate_i/2) exp(-rate_i |a_i - a0_i|).
struct LaplacePrior {
  Vector mean;  // a0
  Vector rate;  // lambda_i > 0
};

using PriorSpec = std::variant<UniformPrior, GaussianPrior, LaplacePrior>;

void validate(const UniformPrior& prior, int p);
void validate(const GaussianPrior& prior, int p);
void validate(const LaplacePrior& prior, int p);

/// Log density of the Gaussian prior at a.
double log_density(const GaussianPrior& prior, const ConstVectorRef& a,
                   const NumericPolicy& policy = {});
/// Log density of the Laplace prior at a.
double log_density(const LaplacePrior& prior, const ConstVectorRef& a);

}  // namespace blr
