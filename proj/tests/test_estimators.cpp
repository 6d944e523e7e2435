#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "blr/estimators.hpp"
#include "oracles.hpp"

using namespace blr;

TEST_CASE("gls: identity design returns the data") {
  const Matrix psi = Matrix::Identity(2, 2);
  Vector y(2);
  y << 1.0, 2.0;
  const PosteriorSummary s = fit_gls(psi, y, NoiseModel::iid(1.0));
  CHECK((s.mean - y).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((s.covariance->values() - Matrix::Identity(2, 2)).lpNorm<Eigen::Infinity>() <=
        1e-15);
  CHECK(*s.log_det_cov == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("gls: intercept-only fit under iid noise is the average") {
  const Matrix psi = Matrix::Ones(3, 1);
  Vector y(3);
  y << 1.0, 4.0, 7.0;
  const PosteriorSummary s = fit_gls(psi, y, NoiseModel::iid(2.5));
  CHECK(s.mean[0] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("gls: heteroscedastic weighted mean matches the grid oracle") {
  const Matrix psi = Matrix::Ones(2, 1);
  Vector y(2);
  y << 0.0, 3.0;
  Vector var(2);
  var << 1.0, 0.25;
  const PosteriorSummary s = fit_gls(psi, y, NoiseModel::diagonal(var));
  CHECK(s.mean[0] == doctest::Approx(2.4).epsilon(1e-12));

  const auto objective = [&](double a) {
    return (0.0 - a) * (0.0 - a) / 1.0 + (3.0 - a) * (3.0 - a) / 0.25;
  };
  const double a_grid = oracles::grid_argmin(objective, 0.0, 3.0, 300001);
  CHECK(s.mean[0] == doctest::Approx(a_grid).epsilon(2e-5));
}

TEST_CASE("gls: uniform prior bounds produce the containment flag") {
  const Matrix psi = Matrix::Ones(3, 1);
  Vector y(3);
  y << 1.0, 1.0, 1.0;
  UniformPrior inside;
  inside.lower = Vector::Constant(1, 0.0);
  inside.upper = Vector::Constant(1, 2.0);
  const PosteriorSummary a = fit_gls(psi, y, NoiseModel::iid(1.0), inside);
  REQUIRE(a.mean_in_bounds.has_value());
  CHECK(*a.mean_in_bounds);
  CHECK(a.warnings.empty());

  UniformPrior outside;
  outside.lower = Vector::Constant(1, 2.0);
  outside.upper = Vector::Constant(1, 3.0);
  const PosteriorSummary b = fit_gls(psi, y, NoiseModel::iid(1.0), outside);
  REQUIRE(b.mean_in_bounds.has_value());
  CHECK_FALSE(*b.mean_in_bounds);
  CHECK(b.warnings == std::vector<std::string>{warning::kMleOutsideBounds});

  UniformPrior half;
  half.lower = Vector::Constant(1, 0.0);
  CHECK_THROWS_AS(fit_gls(psi, y, NoiseModel::iid(1.0), half), InvalidArgument);
}

TEST_CASE("gls: error paths") {
  const Matrix wide = Matrix::Ones(1, 2);
  CHECK_THROWS_AS(fit_gls(wide, Vector::Ones(1), NoiseModel::iid(1.0)),
                  NotPositiveDefinite);
  const Matrix psi = Matrix::Ones(3, 1);
  CHECK_THROWS_AS(fit_gls(psi, Vector::Ones(2), NoiseModel::iid(1.0)),
                  DimensionMismatch);
  // exactly collinear columns: either a clean failure or a flagged rescue
  Matrix collinear(3, 2);
  collinear << 1, 1, 2, 2, 3, 3;
  try {
    const PosteriorSummary s =
        fit_gls(collinear, Vector::Ones(3), NoiseModel::iid(1.0));
    CHECK(s.warnings ==
          std::vector<std::string>{warning::kJitteredNormalEquations});
  } catch (const NotPositiveDefinite&) {
    CHECK(true);
  }
}

TEST_CASE("ols: interpolating design flags the zero residual") {
  Vector y(3);
  y << 0.5, -1.0, 2.0;
  const PosteriorSummary s = fit_ols(Matrix(Matrix::Identity(3, 3)), y);
  CHECK((s.mean - y).lpNorm<Eigen::Infinity>() == 0.0);
  REQUIRE(s.sigma2_mle.has_value());
  CHECK(*s.sigma2_mle == 0.0);
  CHECK_FALSE(s.covariance.has_value());
  CHECK_FALSE(s.log_det_cov.has_value());
  CHECK(s.warnings == std::vector<std::string>{warning::kZeroResidual});
  CHECK_THROWS_AS(posterior_density(s, y), InvalidArgument);
}

TEST_CASE("ols: intercept fit matches the (a, sigma2) grid oracle") {
  const Matrix psi = Matrix::Ones(4, 1);
  Vector y(4);
  y << 0.0, 0.0, 2.0, 2.0;
  const PosteriorSummary s = fit_ols(psi, y);
  CHECK(s.mean[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(*s.sigma2_mle == doctest::Approx(1.0).epsilon(1e-14));

  // maximize the homoscedastic log-likelihood over a grid in (a, sigma2)
  double best_a = 0.0, best_s2 = 0.1, best_ll = -1e300;
  for (int i = 0; i <= 400; ++i) {
    const double a = 0.0 + 2.0 * i / 400.0;
    double rss = 0.0;
    for (int r = 0; r < 4; ++r) rss += (y[r] - a) * (y[r] - a);
    for (int j = 1; j <= 400; ++j) {
      const double s2 = 0.25 + 1.5 * j / 400.0;
      const double ll = -2.0 * std::log(s2) - rss / (2.0 * s2);
      if (ll > best_ll) {
        best_ll = ll;
        best_a = a;
        best_s2 = s2;
      }
    }
  }
  CHECK(s.mean[0] == doctest::Approx(best_a).epsilon(0.01));
  CHECK(*s.sigma2_mle == doctest::Approx(best_s2).epsilon(0.01));
}

TEST_CASE("ols equals gls with identity noise on random instances") {
  SplitMix64 rng(211);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 6 + static_cast<int>(rng.bounded(20));
    const int p = 1 + static_cast<int>(rng.bounded(5));
    const Matrix psi = oracles::random_matrix(rng, n, p);
    const Vector y = oracles::random_vector(rng, n);
    const PosteriorSummary a = fit_ols(psi, y);
    const PosteriorSummary b = fit_gls(psi, y, NoiseModel::iid(1.0));
    CHECK((a.mean - b.mean).lpNorm<Eigen::Infinity>() <=
          1e-12 * (1.0 + b.mean.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("ols residuals are orthogonal to the design") {
  SplitMix64 rng(223);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 10 + static_cast<int>(rng.bounded(30));
    const int p = 1 + static_cast<int>(rng.bounded(6));
    const Matrix psi = oracles::random_matrix(rng, n, p);
    const Vector y = oracles::random_vector(rng, n);
    const PosteriorSummary s = fit_ols(psi, y);
    const Vector g = psi.transpose() * (y - psi * s.mean);
    CHECK(g.lpNorm<Eigen::Infinity>() <=
          1e-9 * (psi.transpose() * y).lpNorm<Eigen::Infinity>() + 1e-12);
  }
}

TEST_CASE("precision posterior parameters and mode") {
  const GammaParams g = precision_posterior(2.0, 4);
  CHECK(g.shape == 3.0);
  CHECK(g.scale == 1.0);
  CHECK(g.mode() == doctest::Approx(2.0).epsilon(1e-15));  // 1/sigma2 = 1/0.5

  const GammaParams h = precision_posterior(10.0, 8);
  CHECK(1.0 / h.mode() == doctest::Approx(1.25).epsilon(1e-12));

  // mode identity (shape-1)*scale == n/rss for arbitrary inputs
  SplitMix64 rng(227);
  for (int rep = 0; rep < 50; ++rep) {
    const double rss = rng.uniform(1e-6, 50.0);
    const int n = 1 + static_cast<int>(rng.bounded(500));
    const GammaParams q = precision_posterior(rss, n);
    CHECK(q.mode() == doctest::Approx(n / rss).epsilon(1e-12));
  }

  CHECK_THROWS_AS(precision_posterior(0.0, 4), InvalidArgument);
  CHECK_THROWS_AS(precision_posterior(-1.0, 4), InvalidArgument);
  CHECK_THROWS_AS(precision_posterior(1.0, 0), InvalidArgument);
}

TEST_CASE("precision mode matches a grid maximization of the log-likelihood") {
  const double rss = 2.0;
  const int n = 4;
  double best_s2 = 0.0, best_ll = -1e300;
  for (int i = 1; i <= 200000; ++i) {
    const double s2 = 2.0 * i / 200000.0;
    const double ll = -0.5 * n * std::log(s2) - rss / (2.0 * s2);
    if (ll > best_ll) {
      best_ll = ll;
      best_s2 = s2;
    }
  }
  const GammaParams g = precision_posterior(rss, n);
  CHECK(1.0 / g.mode() == doctest::Approx(best_s2).epsilon(1e-4));
}

TEST_CASE("ridge: scalar case matches formula and grid oracle") {
  Matrix psi(1, 1);
  psi << 1.0;
  Vector y(1);
  y << 2.0;
  const GaussianPrior prior{Vector::Zero(1), SpdMatrix::identity(1)};
  const PosteriorSummary s = fit_ridge(psi, y, NoiseModel::iid(1.0), prior);
  CHECK(s.mean[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.covariance->values()(0, 0) == doctest::Approx(0.5).epsilon(1e-14));

  const auto exponent = [&](double a) { return (2.0 - a) * (2.0 - a) + a * a; };
  CHECK(s.mean[0] ==
        doctest::Approx(oracles::grid_argmin(exponent, -1.0, 3.0, 400001))
            .epsilon(2e-5));
}

TEST_CASE("ridge limits: vanishing and dominating prior") {
  SplitMix64 rng(229);
  const int n = 20, p = 4;
  const Matrix psi = oracles::random_matrix(rng, n, p);
  const Vector y = oracles::random_vector(rng, n);
  const Vector a0 = oracles::random_vector(rng, p);
  const NoiseModel noise = NoiseModel::iid(1.0);
  const PosteriorSummary gls = fit_gls(psi, y, noise);

  const GaussianPrior wide{a0, SpdMatrix(Matrix(1e12 * Matrix::Identity(p, p)))};
  const PosteriorSummary almost_gls = fit_ridge(psi, y, noise, wide);
  CHECK((almost_gls.mean - gls.mean).norm() <= 1e-4 * gls.mean.norm());

  const GaussianPrior tight{a0, SpdMatrix(Matrix(1e-12 * Matrix::Identity(p, p)))};
  const PosteriorSummary almost_prior = fit_ridge(psi, y, noise, tight);
  CHECK((almost_prior.mean - a0).norm() <= 1e-4 * (1.0 + a0.norm()));
}

TEST_CASE("ridge: exact data at the prior mean returns the prior mean") {
  SplitMix64 rng(233);
  const int n = 10, p = 3;
  const Matrix psi = oracles::random_matrix(rng, n, p);
  const Vector a0 = oracles::random_vector(rng, p);
  const Vector y = psi * a0;
  const GaussianPrior prior{a0, SpdMatrix(oracles::random_spd(rng, p))};
  const PosteriorSummary s = fit_ridge(psi, y, NoiseModel::iid(1.0), prior);
  CHECK((s.mean - a0).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("ridge: N < P is regularized by the prior") {
  SplitMix64 rng(239);
  const Matrix psi = oracles::random_matrix(rng, 3, 6);
  const Vector y = oracles::random_vector(rng, 3);
  const GaussianPrior prior{Vector::Zero(6), SpdMatrix::identity(6)};
  const PosteriorSummary s = fit_ridge(psi, y, NoiseModel::iid(1.0), prior);
  CHECK(s.mean.allFinite());
  CHECK(s.covariance->values().allFinite());
}

TEST_CASE("ridge objective at the MAP undercuts both anchors") {
  SplitMix64 rng(241);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 15, p = 4;
    const Matrix psi = oracles::random_matrix(rng, n, p);
    const Vector y = oracles::random_vector(rng, n);
    const Vector a0 = oracles::random_vector(rng, p);
    const Matrix caa = oracles::random_spd(rng, p);
    const Matrix cm = oracles::random_spd(rng, n);
    const NoiseModel noise = NoiseModel::full(SpdMatrix(cm));
    const GaussianPrior prior{a0, SpdMatrix(caa)};

    const PosteriorSummary gls = fit_gls(psi, y, noise);
    const PosteriorSummary map = fit_ridge(psi, y, noise, prior);

    const Eigen::LLT<Matrix> cm_llt(cm);
    const Eigen::LLT<Matrix> caa_llt(caa);
    const auto objective = [&](const Vector& a) {
      const Vector r = y - psi * a;
      const Vector d = a - a0;
      return r.dot(Vector(cm_llt.solve(r))) + d.dot(Vector(caa_llt.solve(d)));
    };
    const double at_map = objective(map.mean);
    CHECK(at_map <= objective(a0) + 1e-9);
    CHECK(at_map <= objective(gls.mean) + 1e-9);
  }
}

TEST_CASE("laplace MAP: scalar soft thresholding") {
  Matrix psi(1, 1);
  psi << 1.0;
  Vector y(1);
  const NoiseModel noise = NoiseModel::iid(1.0);

  y << 3.0;
  const LaplacePrior lam1{Vector::Zero(1), Vector::Constant(1, 1.0)};
  const PosteriorSummary s1 = fit_laplace_map(psi, y, noise, lam1);
  CHECK(s1.mean[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s1.converged);
  REQUIRE(s1.sign_vector.has_value());
  CHECK((*s1.sign_vector)[0] == 1);
  CHECK(s1.mean[0] == doctest::Approx(oracles::soft_threshold(3.0, 1.0)));

  const LaplacePrior lam5{Vector::Zero(1), Vector::Constant(1, 5.0)};
  const PosteriorSummary s5 = fit_laplace_map(psi, y, noise, lam5);
  CHECK(s5.mean[0] == 0.0);
  CHECK((*s5.sign_vector)[0] == 0);
  CHECK(s5.mean[0] == oracles::soft_threshold(3.0, 5.0));

  const auto objective = [&](double a) {
    return 0.5 * (3.0 - a) * (3.0 - a) + 1.0 * std::abs(a);
  };
  CHECK(s1.mean[0] ==
        doctest::Approx(oracles::grid_argmin(objective, -1.0, 4.0, 500001))
            .epsilon(2e-5));
}

TEST_CASE("laplace MAP: zero rates reproduce the GLS mean exactly") {
  SplitMix64 rng(251);
  const int n = 12, p = 4;
  const Matrix psi = oracles::random_matrix(rng, n, p);
  const Vector y = oracles::random_vector(rng, n);
  const NoiseModel noise = NoiseModel::iid(0.7);
  const LaplacePrior prior{Vector::Zero(p), Vector::Zero(p)};
  const PosteriorSummary lasso = fit_laplace_map(psi, y, noise, prior);
  const PosteriorSummary gls = fit_gls(psi, y, noise);
  CHECK((lasso.mean - gls.mean).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("laplace MAP satisfies the subgradient conditions and matches CD") {
  SplitMix64 rng(257);
  int zero_count = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const int p = 2 + static_cast<int>(rng.bounded(5));
    const int n = 2 * p + static_cast<int>(rng.bounded(20));
    const Matrix psi = oracles::random_matrix(rng, n, p);
    const Vector a0 = oracles::random_vector(rng, p);
    Vector truth = oracles::random_vector(rng, p, -2.0, 2.0);
    Vector y = psi * truth;
    for (int i = 0; i < n; ++i) y[i] += 0.1 * rng.normal();
    const double s2 = rng.uniform(0.25, 2.0);
    const NoiseModel noise = NoiseModel::iid(s2);
    Vector lambda(p);
    for (int i = 0; i < p; ++i) lambda[i] = rng.uniform(0.2, 8.0);
    const LaplacePrior prior{a0, lambda};

    const PosteriorSummary s = fit_laplace_map(psi, y, noise, prior);
    REQUIRE(s.converged);

    const Vector g = psi.transpose() * Vector((y - psi * s.mean) / s2);
    for (int i = 0; i < p; ++i) {
      const double bi = s.mean[i] - a0[i];
      if ((*s.sign_vector)[i] != 0) {
        CHECK(std::abs(g[i] - lambda[i] * ((*s.sign_vector)[i])) <= 1e-7);
        CHECK(bi * (*s.sign_vector)[i] > 0.0);
      } else {
        ++zero_count;
        CHECK(bi == 0.0);
        CHECK(std::abs(g[i]) <= lambda[i] + 1e-7);
      }
    }

    const Matrix w = psi / std::sqrt(s2);
    const Vector z = (y - psi * a0) / std::sqrt(s2);
    const Vector b_cd = oracles::cd_lasso(w, z, lambda);
    CHECK((s.mean - (a0 + b_cd)).lpNorm<Eigen::Infinity>() <= 1e-6);
  }
  CHECK(zero_count > 0);  // the ensemble must exercise the clamped branch
}

TEST_CASE("laplace MAP: exhausted budget raises NoSignFixedPoint") {
  Matrix psi(2, 1);
  psi << 1.0, 1.0;
  Vector y(2);
  y << 3.0, 3.0;
  NumericPolicy tiny;
  tiny.sign_budget_factor = 1;  // one solve; the sign flip needs a second
  const LaplacePrior prior{Vector::Zero(1), Vector::Constant(1, 50.0)};
  CHECK_THROWS_AS(fit_laplace_map(psi, y, NoiseModel::iid(1.0), prior, tiny),
                  NoSignFixedPoint);
}

TEST_CASE("laplace MAP: N < P fails cleanly") {
  const Matrix wide = Matrix::Ones(1, 3);
  const LaplacePrior prior{Vector::Zero(3), Vector::Ones(3)};
  CHECK_THROWS_AS(
      fit_laplace_map(wide, Vector::Ones(1), NoiseModel::iid(1.0), prior),
      NotPositiveDefinite);
}

TEST_CASE("posterior density at and away from the mean") {
  const Matrix psi = Matrix::Identity(1, 1);
  Vector y(1);
  y << 0.0;
  const PosteriorSummary s = fit_gls(psi, y, NoiseModel::iid(1.0));
  const DensityValue at_one = posterior_density(s, Vector::Constant(1, 1.0));
  CHECK(at_one.density ==
        doctest::Approx(std::exp(-0.5) / std::sqrt(2.0 * M_PI)).epsilon(1e-12));

  const DensityValue at_mean = posterior_density(s, s.mean);
  CHECK(at_mean.log_density ==
        doctest::Approx(-0.5 * oracles::kLog2Pi - 0.5 * *s.log_det_cov)
            .epsilon(1e-12));
}

TEST_CASE("posterior density matches quadrature normalization at P=3") {
  SplitMix64 rng(263);
  const Matrix cov = oracles::random_spd(rng, 3, 0.8);
  const Vector mean = oracles::random_vector(rng, 3);

  PosteriorSummary s;
  s.method = "gls";
  s.mean = mean;
  s.covariance = SpdMatrix(cov);
  s.log_det_cov = factor(*s.covariance).log_det();

  // normalization from 1-D quadratures in the eigenbasis
  const Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  double log_z = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double lam = es.eigenvalues()[i];
    const double z1 = oracles::simpson(
        [lam](double t) { return std::exp(-0.5 * t * t / lam); },
        -14.0 * std::sqrt(lam), 14.0 * std::sqrt(lam), 40000);
    log_z += std::log(z1);
  }

  for (int rep = 0; rep < 5; ++rep) {
    const Vector a = mean + oracles::random_vector(rng, 3);
    const Vector t = es.eigenvectors().transpose() * (a - mean);
    const double quad = (t.array().square() / es.eigenvalues().array()).sum();
    const double log_oracle = -0.5 * quad - log_z;
    const DensityValue d = posterior_density(s, a);
    CHECK(d.log_density == doctest::Approx(log_oracle).epsilon(1e-10));
    CHECK(std::abs(d.density - std::exp(log_oracle)) <= 1e-8);
  }

  CHECK_THROWS_AS(posterior_density(s, Vector::Zero(2)), DimensionMismatch);
}

TEST_CASE("fits are deterministic down to the bit") {
  SplitMix64 rng(269);
  const int n = 18, p = 5;
  const Matrix psi = oracles::random_matrix(rng, n, p);
  const Vector y = oracles::random_vector(rng, n);
  const Matrix cm = oracles::random_spd(rng, n);
  const NoiseModel noise = NoiseModel::full(SpdMatrix(cm));
  const GaussianPrior prior{oracles::random_vector(rng, p),
                            SpdMatrix(oracles::random_spd(rng, p))};

  const PosteriorSummary a = fit_ridge(psi, y, noise, prior);
  const PosteriorSummary b = fit_ridge(psi, y, noise, prior);
  CHECK((a.mean.array() == b.mean.array()).all());
  CHECK((a.covariance->values().array() == b.covariance->values().array()).all());
  CHECK(*a.log_det_cov == *b.log_det_cov);
}
