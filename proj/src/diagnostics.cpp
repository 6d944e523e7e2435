#include "blr/diagnostics.hpp"

#include <cmath>

#include "blr/rng.hpp"

namespace blr {

const char* method_name(FitMethod m) {
  switch (m) {
    case FitMethod::gls: return "gls";
    case FitMethod::ols: return "ols";
    case FitMethod::ridge: return "ridge";
    case FitMethod::lasso: return "lasso";
  }
  return "unknown";
}

FitMethod method_from_name(const std::string& name) {
  if (name == "gls") return FitMethod::gls;
  if (name == "ols") return FitMethod::ols;
  if (name == "ridge") return FitMethod::ridge;
  if (name == "lasso") return FitMethod::lasso;
  throw InvalidArgument("unknown method: " + name);
}

namespace {

PosteriorSummary fit_once(FitMethod method, const Matrix& psi, const Vector& y,
                          const NoiseModel& noise,
                          const std::optional<PriorSpec>& prior,
                          const NumericPolicy& policy) {
  switch (method) {
    case FitMethod::ols:
      return fit_ols(psi, y, policy);
    case FitMethod::gls: {
      std::optional<UniformPrior> bounds;
      if (prior.has_value()) {
        const auto* u = std::get_if<UniformPrior>(&*prior);
        if (!u) throw InvalidArgument("gls accepts a uniform prior only");
        bounds = *u;
      }
      return fit_gls(psi, y, noise, bounds, policy);
    }
    case FitMethod::ridge: {
      if (!prior.has_value())
        throw InvalidArgument("ridge requires a gaussian prior");
      const auto* g = std::get_if<GaussianPrior>(&*prior);
      if (!g) throw InvalidArgument("ridge requires a gaussian prior");
      return fit_ridge(psi, y, noise, *g, policy);
    }
    case FitMethod::lasso: {
      if (!prior.has_value())
        throw InvalidArgument("lasso requires a laplace prior");
      const auto* l = std::get_if<LaplacePrior>(&*prior);
      if (!l) throw InvalidArgument("lasso requires a laplace prior");
      return fit_laplace_map(psi, y, noise, *l, policy);
    }
  }
  throw InvalidArgument("unknown method");
}

}  // namespace

BootstrapSummary bootstrap_coefficients(const Dataset& data, const IndexSet& set,
                                        const NoiseModel& noise,
                                        const std::optional<PriorSpec>& prior,
                                        FitMethod method, int replicates,
                                        std::uint64_t seed,
                                        const NumericPolicy& policy) {
  validate(data);
  if (replicates < 2) throw InvalidArgument("bootstrap needs replicates >= 2");
  const int n = data.n();
  const int p = set.size();

  // The full-data fit must be valid before resampling starts.
  {
    const Matrix psi = evaluate_design_values(data.x, set);
    fit_once(method, psi, data.y, noise, prior, policy);
  }

  Matrix means(replicates, p);
  int completed = 0;
  int skipped = 0;
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int r = 0; r < replicates; ++r) {
    SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(r)));
    for (int i = 0; i < n; ++i)
      idx[static_cast<std::size_t>(i)] =
          static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));

    Dataset sample;
    sample.x.resize(n, data.d());
    sample.y.resize(n);
    for (int i = 0; i < n; ++i) {
      sample.x.row(i) = data.x.row(idx[static_cast<std::size_t>(i)]);
      sample.y[i] = data.y[idx[static_cast<std::size_t>(i)]];
    }

    try {
      const NoiseModel sample_noise = noise.resample(idx);
      const Matrix psi = evaluate_design_values(sample.x, set);
      const PosteriorSummary fit =
          fit_once(method, psi, sample.y, sample_noise, prior, policy);
      // A jitter-rescued replicate is rank-deficient in substance; skipping
      // it keeps the spread estimate unbiased by regularization.
      bool jittered = false;
      for (const auto& w : fit.warnings)
        jittered = jittered || w == warning::kJitteredNormalEquations;
      if (jittered) {
        ++skipped;
      } else {
        means.row(completed) = fit.mean.transpose();
        ++completed;
      }
    } catch (const NotPositiveDefinite&) {
      ++skipped;
    } catch (const NoSignFixedPoint&) {
      ++skipped;
    }
  }
  if (completed < 2)
    throw Error("bootstrap failed: fewer than 2 replicates produced a fit (" +
                std::to_string(skipped) + " skipped)");

  BootstrapSummary out;
  out.replicates = replicates;
  out.completed = completed;
  out.skipped = skipped;
  out.seed = seed;
  out.rng_algorithm = kRngAlgorithm;
  const auto block = means.topRows(completed);
  out.coefficient_means = block.colwise().mean();
  Vector ss = Vector::Zero(p);
  for (int r = 0; r < completed; ++r) {
    const Vector d = block.row(r).transpose() - out.coefficient_means;
    ss += d.cwiseProduct(d);
  }
  out.coefficient_stddevs = (ss / (completed - 1)).cwiseSqrt();
  return out;
}

Prediction predict(const PosteriorSummary& summary,
                   const ConstMatrixRef& new_design,
                   const std::optional<NoiseModel>& noise) {
  if (new_design.cols() != summary.mean.size())
    throw DimensionMismatch("new design has " + std::to_string(new_design.cols()) +
                            " columns, posterior has P=" +
                            std::to_string(summary.mean.size()));
  const int m = static_cast<int>(new_design.rows());

  Prediction out;
  out.mean = new_design * summary.mean;
  if (summary.covariance.has_value()) {
    const Matrix cpsit = summary.covariance->values() * new_design.transpose();
    out.model_variance =
        (new_design.cwiseProduct(cpsit.transpose())).rowwise().sum();
    // Quadratic forms are non-negative up to rounding.
    out.model_variance = out.model_variance.cwiseMax(0.0);
  } else {
    out.model_variance = Vector::Zero(m);
  }
  out.noise_variance = Vector::Zero(m);
  if (noise.has_value()) {
    const auto pinned = noise->rows();
    if (pinned && *pinned != m)
      throw DimensionMismatch("noise model does not cover the new rows");
    for (int i = 0; i < m; ++i) out.noise_variance[i] = noise->row_variance(i);
  }
  return out;
}

}  // namespace blr
