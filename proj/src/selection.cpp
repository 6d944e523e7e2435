#include "blr/selection.hpp"

#include <cmath>

namespace blr {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

double gaussian_log_likelihood(const ConstMatrixRef& design,
                               const ConstVectorRef& y, const NoiseModel& noise,
                               const ConstVectorRef& coeffs) {
  const int n = static_cast<int>(y.size());
  const Vector r = y - design * coeffs;
  const Vector wr = noise.whiten(r);
  return -0.5 * n * kLog2Pi - 0.5 * noise.log_det(n) - 0.5 * wr.squaredNorm();
}

EvidenceReport assemble(const PosteriorSummary& fit, double loglik,
                        double logprior) {
  if (!fit.log_det_cov.has_value())
    throw InvalidArgument("evidence needs a posterior covariance");
  EvidenceReport rep;
  rep.p = fit.p();
  rep.log_likelihood_at_map = loglik;
  rep.log_prior_at_map = logprior;
  rep.log_evidence =
      loglik + logprior + 0.5 * rep.p * kLog2Pi + 0.5 * *fit.log_det_cov;
  rep.kic = -2.0 * rep.log_evidence;
  return rep;
}

}  // namespace

GaussianPrior degree_weighted_prior(const IndexSet& set, const PriorPolicy& policy) {
  if (!(policy.sigma0_sq > 0.0) || !std::isfinite(policy.sigma0_sq))
    throw InvalidArgument("prior policy needs sigma0_sq > 0");
  if (!(policy.gamma >= 0.0) || !std::isfinite(policy.gamma))
    throw InvalidArgument("prior policy needs gamma >= 0");
  const int p = set.size();
  Vector var(p);
  for (int j = 0; j < p; ++j)
    var[j] = policy.sigma0_sq *
             std::pow(1.0 + set[j].total_degree(), -policy.gamma);
  return GaussianPrior{Vector::Zero(p), SpdMatrix::from_diagonal(var)};
}

EvidenceReport log_evidence_map(const ConstMatrixRef& design,
                                const ConstVectorRef& y, const NoiseModel& noise,
                                const GaussianPrior& prior,
                                const NumericPolicy& policy) {
  const PosteriorSummary fit = fit_ridge(design, y, noise, prior, policy);
  return assemble(fit, gaussian_log_likelihood(design, y, noise, fit.mean),
                  log_density(prior, fit.mean, policy));
}

EvidenceReport log_evidence_map(const ConstMatrixRef& design,
                                const ConstVectorRef& y, const NoiseModel& noise,
                                const LaplacePrior& prior,
                                const NumericPolicy& policy) {
  const PosteriorSummary fit = fit_laplace_map(design, y, noise, prior, policy);
  return assemble(fit, gaussian_log_likelihood(design, y, noise, fit.mean),
                  log_density(prior, fit.mean));
}

EvidenceReport evidence_from_fit(const PosteriorSummary& fit,
                                 const ConstMatrixRef& design,
                                 const ConstVectorRef& y, const NoiseModel& noise,
                                 const PriorSpec& prior,
                                 const NumericPolicy& policy) {
  const double loglik = gaussian_log_likelihood(design, y, noise, fit.mean);
  if (const auto* g = std::get_if<GaussianPrior>(&prior))
    return assemble(fit, loglik, log_density(*g, fit.mean, policy));
  if (const auto* l = std::get_if<LaplacePrior>(&prior))
    return assemble(fit, loglik, log_density(*l, fit.mean));
  throw InvalidArgument("evidence is defined for gaussian and laplace priors only");
}

double kic(const ConstMatrixRef& design, const ConstVectorRef& y,
           const NoiseModel& noise, const PriorSpec& prior,
           const NumericPolicy& policy) {
  if (const auto* g = std::get_if<GaussianPrior>(&prior))
    return log_evidence_map(design, y, noise, *g, policy).kic;
  if (const auto* l = std::get_if<LaplacePrior>(&prior))
    return log_evidence_map(design, y, noise, *l, policy).kic;
  throw InvalidArgument("KIC is defined for gaussian and laplace priors only");
}

namespace {

double kic_for_set(const Dataset& data, const IndexSet& set,
                   const NoiseModel& noise, const SelectionOptions& options) {
  const Matrix psi = evaluate_design_values(data.x, set);
  const GaussianPrior prior = degree_weighted_prior(set, options.policy);
  return log_evidence_map(psi, data.y, noise, prior, options.numeric).kic;
}

}  // namespace

std::pair<IndexSet, SelectionTrace> stepwise_select(const Dataset& data,
                                                    const IndexSet& candidates,
                                                    const NoiseModel& noise,
                                                    const SelectionOptions& options) {
  validate(data);
  if (candidates.size() == 0) throw InvalidArgument("candidate set is empty");
  if (candidates.dim() != data.d())
    throw DimensionMismatch("candidate indices have dimension " +
                            std::to_string(candidates.dim()) +
                            ", data has d=" + std::to_string(data.d()));
  if (!(options.tie_epsilon >= 0.0))
    throw InvalidArgument("tie_epsilon must be >= 0");
  if (options.max_sweeps < 1) throw InvalidArgument("max_sweeps must be >= 1");

  // Start from the constant term.
  IndexSet current(
      {MultiIndex(std::vector<int>(static_cast<std::size_t>(data.d()), 0))},
      candidates.family());

  SelectionTrace trace;
  trace.initial_kic = kic_for_set(data, current, noise, options);
  double best_kic = trace.initial_kic;

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    ++trace.sweeps;
    bool accepted_any = false;
    for (const MultiIndex& alpha : candidates) {
      if (current.contains(alpha)) continue;
      SelectionStep step{alpha, std::nullopt, false, current.size(), ""};
      try {
        const IndexSet enlarged = current.with(alpha);
        const double k = kic_for_set(data, enlarged, noise, options);
        step.kic_with_candidate = k;
        if (k < best_kic - options.tie_epsilon) {
          step.accepted = true;
          current = enlarged;
          best_kic = k;
          accepted_any = true;
        }
      } catch (const Error& e) {
        step.note = e.what();  // rejected, not fatal
      }
      step.p_after = current.size();
      trace.steps.push_back(std::move(step));
    }
    if (!accepted_any) break;
  }

  trace.final_set = current;
  trace.final_kic = best_kic;
  return {current, trace};
}

}  // namespace blr
