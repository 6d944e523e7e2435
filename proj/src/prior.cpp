#include "blr/prior.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace blr {

void validate(const UniformPrior& prior, int p) {
  if (prior.lower.has_value() != prior.upper.has_value())
    throw InvalidArgument("uniform prior needs both bounds or neither");
  if (!prior.has_bounds()) return;
  if (prior.lower->size() != p || prior.upper->size() != p)
    throw DimensionMismatch("uniform prior bounds must have length P=" +
                            std::to_string(p));
  for (int i = 0; i < p; ++i) {
    if (!((*prior.lower)[i] < (*prior.upper)[i]))
      throw InvalidArgument("uniform prior requires lower < upper per coefficient");
  }
}

void validate(const GaussianPrior& prior, int p) {
  if (prior.mean.size() != p)
    throw DimensionMismatch("gaussian prior mean must have length P=" +
                            std::to_string(p));
  if (prior.cov.size() != p)
    throw DimensionMismatch("gaussian prior covariance must be PxP");
}

void validate(const LaplacePrior& prior, int p) {
  if (prior.mean.size() != p || prior.rate.size() != p)
    throw DimensionMismatch("laplace prior mean/rate must have length P=" +
                            std::to_string(p));
  // rate == 0 is the degenerate penalty-free limit; the MAP accepts it, the
  // normalized density (log_density) does not.
  for (int i = 0; i < p; ++i) {
    if (!(prior.rate[i] >= 0.0) || !std::isfinite(prior.rate[i]))
      throw InvalidArgument("laplace prior rates must be non-negative and finite");
  }
}

double log_density(const GaussianPrior& prior, const ConstVectorRef& a,
                   const NumericPolicy& policy) {
  const int p = static_cast<int>(prior.mean.size());
  if (a.size() != p) throw DimensionMismatch("density point must have length P");
  const SpdFactor f = factor(prior.cov, policy);
  const Vector d = a - prior.mean;
  const double quad = d.dot(Vector(f.solve(d)));
  return -0.5 * p * std::log(2.0 * std::numbers::pi) - 0.5 * f.log_det() -
         0.5 * quad;
}

double log_density(const LaplacePrior& prior, const ConstVectorRef& a) {
  if (a.size() != prior.mean.size())
    throw DimensionMismatch("density point must have length P");
  double lp = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    if (!(prior.rate[i] > 0.0))
      throw InvalidArgument("laplace density needs strictly positive rates");
    lp += std::log(0.5 * prior.rate[i]) -
          prior.rate[i] * std::abs(a[i] - prior.mean[i]);
  }
  return lp;
}

}  // namespace blr
