#include "blr/estimators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_set>

namespace blr {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112353;  // ln(2*pi)

void check_fit_inputs(const ConstMatrixRef& design, const ConstVectorRef& y) {
  if (design.cols() < 1) throw InvalidArgument("design matrix has no columns");
  if (design.rows() != y.size())
    throw DimensionMismatch("design has " + std::to_string(design.rows()) +
                            " rows, y has " + std::to_string(y.size()));
  if (!design.allFinite() || !y.allFinite())
    throw InvalidArgument("fit inputs contain non-finite values");
}

// The flat-prior and Laplace-prior normal equations need at least as many
// rows as columns; only the Gaussian prior regularizes N < P.
void require_n_ge_p(const ConstMatrixRef& design) {
  if (design.rows() < design.cols())
    throw NotPositiveDefinite("normal equations are singular: N=" +
                              std::to_string(design.rows()) + " < P=" +
                              std::to_string(design.cols()));
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

std::string sign_state(const std::vector<int>& s, const std::vector<int>& prev,
                       const std::vector<bool>& flipped) {
  std::string key;
  key.reserve(3 * s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    key += static_cast<char>('1' + s[i]);
    key += static_cast<char>('1' + prev[i]);
    key += flipped[i] ? 'f' : '.';
  }
  return key;
}

std::string sign_string(const std::vector<int>& s) {
  std::string out;
  for (int v : s) out += (v > 0 ? '+' : (v < 0 ? '-' : '0'));
  return out;
}

}  // namespace

PosteriorSummary fit_gls(const ConstMatrixRef& design, const ConstVectorRef& y,
                         const NoiseModel& noise,
                         const std::optional<UniformPrior>& prior,
                         const NumericPolicy& policy) {
  check_fit_inputs(design, y);
  require_n_ge_p(design);
  const int p = static_cast<int>(design.cols());

  const Matrix w = noise.whiten(design);
  const Vector z = noise.whiten(y);
  const SpdMatrix gram(w.transpose() * w);
  const SpdFactor gf = factor(gram, policy);

  PosteriorSummary out;
  out.method = "gls";
  out.mean = gf.solve(w.transpose() * z);
  out.covariance = SpdMatrix(gf.inverse());
  out.log_det_cov = -gf.log_det();
  if (gf.jittered()) out.warnings.push_back(warning::kJitteredNormalEquations);

  if (prior.has_value()) {
    validate(*prior, p);
    if (prior->has_bounds()) {
      bool inside = true;
      for (int i = 0; i < p; ++i)
        inside = inside && (*prior->lower)[i] <= out.mean[i] &&
                 out.mean[i] <= (*prior->upper)[i];
      out.mean_in_bounds = inside;
      if (!inside) out.warnings.push_back(warning::kMleOutsideBounds);
    }
  }
  return out;
}

PosteriorSummary fit_ols(const ConstMatrixRef& design, const ConstVectorRef& y,
                         const NumericPolicy& policy) {
  check_fit_inputs(design, y);
  require_n_ge_p(design);
  const int n = static_cast<int>(design.rows());
  const int p = static_cast<int>(design.cols());

  const SpdMatrix gram(design.transpose() * design);
  const SpdFactor gf = factor(gram, policy);

  PosteriorSummary out;
  out.method = "ols";
  out.mean = gf.solve(design.transpose() * y);
  if (gf.jittered()) out.warnings.push_back(warning::kJitteredNormalEquations);

  const Vector r = y - design * out.mean;
  const double rss = r.squaredNorm();
  const double sigma2 = rss / n;
  out.sigma2_mle = sigma2;
  if (sigma2 == 0.0) {
    // Interpolating design: the covariance would be singular, so it is
    // suppressed rather than floored.
    out.warnings.push_back(warning::kZeroResidual);
  } else {
    out.covariance = SpdMatrix(sigma2 * gf.inverse());
    out.log_det_cov = p * std::log(sigma2) - gf.log_det();
  }
  return out;
}

GammaParams precision_posterior(double residual_ss, int n) {
  if (n < 1) throw InvalidArgument("precision posterior needs n >= 1");
  if (!(residual_ss > 0.0))
    throw InvalidArgument("precision posterior needs residual_ss > 0");
  return GammaParams{0.5 * (n + 2), 2.0 / residual_ss};
}

PosteriorSummary fit_ridge(const ConstMatrixRef& design, const ConstVectorRef& y,
                           const NoiseModel& noise, const GaussianPrior& prior,
                           const NumericPolicy& policy) {
  check_fit_inputs(design, y);
  const int p = static_cast<int>(design.cols());
  validate(prior, p);

  const Matrix w = noise.whiten(design);
  const Vector z = noise.whiten(y);
  const SpdFactor cf = factor(prior.cov, policy);
  const Matrix prior_precision = cf.inverse();

  const SpdMatrix a(Matrix(w.transpose() * w) + prior_precision);
  const SpdFactor af = factor(a, policy);

  PosteriorSummary out;
  out.method = "ridge";
  out.mean = af.solve(w.transpose() * z + prior_precision * prior.mean);
  out.covariance = SpdMatrix(af.inverse());
  out.log_det_cov = -af.log_det();
  if (af.jittered() || cf.jittered())
    out.warnings.push_back(warning::kJitteredNormalEquations);
  return out;
}

PosteriorSummary fit_laplace_map(const ConstMatrixRef& design,
                                 const ConstVectorRef& y, const NoiseModel& noise,
                                 const LaplacePrior& prior,
                                 const NumericPolicy& policy) {
  check_fit_inputs(design, y);
  require_n_ge_p(design);
  const int p = static_cast<int>(design.cols());
  validate(prior, p);

  // Work in b = a - a0: y' = y - Psi a0, minimize
  //   1/2 (y'-Psi b)^t C_M^-1 (y'-Psi b) + sum_i lambda_i |b_i|.
  const Matrix w = noise.whiten(design);
  const Vector z = noise.whiten(Vector(y - design * prior.mean));
  const SpdMatrix gram(w.transpose() * w);
  const SpdFactor gf = factor(gram, policy);
  const Vector t = w.transpose() * z;  // Psi^t C_M^-1 (y - Psi a0)

  const Vector b_gls = gf.solve(t);

  std::vector<int> s(p), prev_raw(p);
  std::vector<bool> flipped(p, false);
  for (int i = 0; i < p; ++i) prev_raw[i] = s[i] = sign_of(b_gls[i]);

  const int budget = std::max(policy.sign_budget_factor * p, 1);
  int iterations = 0;
  Vector b = Vector::Zero(p);
  std::unordered_set<std::string> visited;
  std::ostringstream trace;
  trace << "init s=" << sign_string(s);
  visited.insert(sign_state(s, prev_raw, flipped));

  bool converged = false;
  while (!converged) {
    // Solve the free subsystem under the assumed signs.
    std::vector<int> free_idx;
    for (int i = 0; i < p; ++i)
      if (s[i] != 0) free_idx.push_back(i);

    b.setZero();
    std::vector<int> raw(p, 0);
    if (!free_idx.empty()) {
      const int nf = static_cast<int>(free_idx.size());
      Matrix gff(nf, nf);
      Vector rhs(nf);
      for (int r = 0; r < nf; ++r) {
        rhs[r] = t[free_idx[r]] - prior.rate[free_idx[r]] * s[free_idx[r]];
        for (int c = 0; c < nf; ++c)
          gff(r, c) = gram.values()(free_idx[r], free_idx[c]);
      }
      const Vector bf = factor(SpdMatrix(gff), policy).solve(rhs);
      ++iterations;
      for (int r = 0; r < nf; ++r) {
        b[free_idx[r]] = bf[r];
        raw[free_idx[r]] = sign_of(bf[r]);
      }
    }

    bool signs_match = true;
    for (int i : free_idx) signs_match = signs_match && raw[i] == s[i];

    if (signs_match) {
      // Candidate fixed point. The free coordinates satisfy the stationarity
      // condition by construction; verify the clamped subgradient bound and
      // re-activate the worst violator if there is one.
      const Vector g = t - gram.values() * b;
      int worst = -1;
      double worst_excess = 0.0;
      for (int i = 0; i < p; ++i) {
        if (s[i] != 0) continue;
        const double excess =
            std::abs(g[i]) - prior.rate[i] * (1.0 + 1e-12) - 1e-12;
        if (excess > worst_excess) {
          worst_excess = excess;
          worst = i;
        }
      }
      if (worst < 0) {
        converged = true;
        break;
      }
      s[worst] = sign_of(g[worst]);
      prev_raw[worst] = s[worst];
      flipped[worst] = false;
      trace << " reactivate[" << worst << "]->" << sign_string(s);
    } else {
      for (int i : free_idx) {
        const int cur = raw[i];
        if (cur == 0) {
          s[i] = 0;  // landed exactly on the kink
          continue;
        }
        if (cur != prev_raw[i] && prev_raw[i] != 0) {
          if (flipped[i]) {
            // Second consecutive flip: clamp to a0 and drop from the updates.
            s[i] = 0;
            flipped[i] = false;
            prev_raw[i] = 0;
            continue;
          }
          flipped[i] = true;
        } else {
          flipped[i] = false;
        }
        prev_raw[i] = cur;
        s[i] = cur;
      }
      trace << " -> " << sign_string(s);
    }

    if (iterations >= budget)
      throw NoSignFixedPoint(
          "laplace MAP sign iteration exhausted its budget of " +
              std::to_string(budget) + " solves",
          trace.str());
    if (!visited.insert(sign_state(s, prev_raw, flipped)).second)
      throw NoSignFixedPoint("laplace MAP sign iteration cycled", trace.str());
  }

  PosteriorSummary out;
  out.method = "laplace-map";
  out.mean = prior.mean + b;
  out.covariance = SpdMatrix(gf.inverse());
  out.log_det_cov = -gf.log_det();
  out.iterations = iterations;
  out.converged = true;
  IntVector sv(p);
  for (int i = 0; i < p; ++i) sv[i] = s[i];
  out.sign_vector = sv;
  if (gf.jittered()) out.warnings.push_back(warning::kJitteredNormalEquations);
  return out;
}

DensityValue posterior_density(const PosteriorSummary& summary,
                               const ConstVectorRef& a,
                               const NumericPolicy& policy) {
  if (!summary.covariance.has_value() || !summary.log_det_cov.has_value())
    throw InvalidArgument("posterior density needs a covariance (suppressed "
                          "for zero-residual fits)");
  if (a.size() != summary.mean.size())
    throw DimensionMismatch("density point must have length P");
  const SpdFactor f = factor(*summary.covariance, policy);
  const Vector d = a - summary.mean;
  const double quad = d.dot(Vector(f.solve(d)));
  const double logp =
      -0.5 * summary.p() * kLog2Pi - 0.5 * *summary.log_det_cov - 0.5 * quad;
  return DensityValue{logp, std::exp(logp)};
}

}  // namespace blr
