#pragma once
#include <optional>
#include <utility>

#include "blr/estimators.hpp"

namespace blr {

/// Hyperparameters of the degree-penalizing Gaussian prior used for stepwise
/// selection: variance sigma0_sq * (1 + total_degree)^(-gamma) per term.
struct PriorPolicy {
  double sigma0_sq = 1.0;
  double gamma = 2.0;
};

/// Zero-mean Gaussian prior whose variances shrink with the total degree of
/// each basis term, favouring low-degree models.
GaussianPrior degree_weighted_prior(const IndexSet& set, const PriorPolicy& policy);

/// Log model evidence under the Laplace approximation at the MAP, and the
/// KIC = -2 log evidence, split into its terms.
struct EvidenceReport {
  double log_evidence;
  double kic;
  double log_likelihood_at_map;
  double log_prior_at_map;
  int p;
};

/// Evidence for a Gaussian prior:
///   ln p(y|A) = ln p(y|a_hat) + ln p(a_hat) + (P/2) ln(2 pi) + 1/2 ln|C_hat|.
/// Exact for the linear-Gaussian model.
EvidenceReport log_evidence_map(const ConstMatrixRef& design,
                                const ConstVectorRef& y, const NoiseModel& noise,
                                const GaussianPrior& prior,
                                const NumericPolicy& policy = {});

/// Same construction evaluated at the Laplace-prior MAP.
EvidenceReport log_evidence_map(const ConstMatrixRef& design,
                                const ConstVectorRef& y, const NoiseModel& noise,
                                const LaplacePrior& prior,
                                const NumericPolicy& policy = {});

/// Evidence terms given an already-computed fit (the fit must match the prior).
EvidenceReport evidence_from_fit(const PosteriorSummary& fit,
                                 const ConstMatrixRef& design,
                                 const ConstVectorRef& y, const NoiseModel& noise,
                                 const PriorSpec& prior,
                                 const NumericPolicy& policy = {});

/// KIC for a Gaussian or Laplace prior (uniform priors have no evidence).
double kic(const ConstMatrixRef& design, const ConstVectorRef& y,
           const NoiseModel& noise, const PriorSpec& prior,
           const NumericPolicy& policy = {});

struct SelectionStep {
  MultiIndex candidate;
  std::optional<double> kic_with_candidate;  // empty when the fit failed
  bool accepted = false;
  int p_after = 0;
  std::string note;  // failure reason for rejected-with-error steps
};

struct SelectionTrace {
  double initial_kic = 0.0;
  std::vector<SelectionStep> steps;
  IndexSet final_set;
  double final_kic = 0.0;
  int sweeps = 0;
};

struct SelectionOptions {
  PriorPolicy policy;
  double tie_epsilon = 1e-9;  // acceptance requires a drop larger than this
  int max_sweeps = 1;         // >1 repeats passes until one accepts nothing
  NumericPolicy numeric;
};

/// Stepwise KIC search: starts from the constant-term set, visits candidates
/// in graded-lexicographic order, keeps a candidate iff the KIC of the
/// enlarged set drops by more than tie_epsilon.
std::pair<IndexSet, SelectionTrace> stepwise_select(const Dataset& data,
                                                    const IndexSet& candidates,
                                                    const NoiseModel& noise,
                                                    const SelectionOptions& options);

}  // namespace blr
