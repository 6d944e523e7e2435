// Test-side oracles, kept independent of the library paths they check:
// grid searches, closed-form marginals via plain Eigen, coordinate-descent
// LASSO, quadrature. Only the RNG helpers are shared with the library.
#pragma once
#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "blr/rng.hpp"

namespace oracles {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

// --- random instance helpers -----------------------------------------------

inline MatrixXd random_matrix(blr::SplitMix64& rng, int rows, int cols,
                              double lo = -1.0, double hi = 1.0) {
  MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(lo, hi);
  return m;
}

inline VectorXd random_vector(blr::SplitMix64& rng, int n, double lo = -1.0,
                              double hi = 1.0) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

// Well-conditioned random SPD matrix: A A^t + delta I.
inline MatrixXd random_spd(blr::SplitMix64& rng, int n, double delta = 0.5) {
  const MatrixXd a = random_matrix(rng, n, n);
  MatrixXd m = a * a.transpose();
  m.diagonal().array() += delta;
  return m;
}

// SPD matrix with a prescribed condition number, via Q diag(lambda) Q^t.
inline MatrixXd spd_with_condition(blr::SplitMix64& rng, int n, double cond) {
  const MatrixXd a = random_matrix(rng, n, n);
  const Eigen::HouseholderQR<MatrixXd> qr(a);
  const MatrixXd q = qr.householderQ();
  VectorXd lam(n);
  for (int i = 0; i < n; ++i)
    lam[i] = std::pow(cond, -static_cast<double>(i) / std::max(1, n - 1));
  return q * lam.asDiagonal() * q.transpose();
}

// --- 1-D grid optimization ---------------------------------------------------

// argmin of f over [lo, hi] on a uniform grid with `points` samples.
inline double grid_argmin(const std::function<double(double)>& f, double lo,
                          double hi, int points) {
  double best_x = lo;
  double best_f = f(lo);
  for (int i = 1; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  return best_x;
}

// --- closed forms -------------------------------------------------------------

// argmin 1/2 (y - a)^2 + lambda |a|.
inline double soft_threshold(double y, double lambda) {
  if (y > lambda) return y - lambda;
  if (y < -lambda) return y + lambda;
  return 0.0;
}

// ln N(y; mu, cov) via plain Eigen LLT on the dense covariance.
inline double gaussian_logpdf(const VectorXd& y, const VectorXd& mu,
                              const MatrixXd& cov) {
  const Eigen::LLT<MatrixXd> llt(cov);
  const VectorXd d = y - mu;
  const VectorXd s = llt.solve(d);
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * y.size() * kLog2Pi - 0.5 * logdet - 0.5 * d.dot(s);
}

// Exact marginal ln p(y) for y = Psi a + eps, a ~ N(a0, Caa), eps ~ N(0, Cm).
inline double exact_marginal_logpdf(const MatrixXd& psi, const VectorXd& y,
                                    const MatrixXd& cm, const VectorXd& a0,
                                    const MatrixXd& caa) {
  const MatrixXd cov = cm + psi * caa * psi.transpose();
  return gaussian_logpdf(y, psi * a0, cov);
}

// --- coordinate-descent LASSO oracle ----------------------------------------
//
// minimizes 1/2 ||z - W b||^2 + sum_i lambda_i |b_i| by cyclic coordinate
// descent; independent of the sign-iteration path under test.
inline VectorXd cd_lasso(const MatrixXd& w, const VectorXd& z,
                         const VectorXd& lambda, int max_iter = 200000,
                         double tol = 1e-14) {
  const int p = static_cast<int>(w.cols());
  VectorXd b = VectorXd::Zero(p);
  VectorXd col_ss(p);
  for (int j = 0; j < p; ++j) col_ss[j] = w.col(j).squaredNorm();
  VectorXd r = z;  // residual z - W b
  for (int it = 0; it < max_iter; ++it) {
    double max_delta = 0.0;
    for (int j = 0; j < p; ++j) {
      const double rho = w.col(j).dot(r) + col_ss[j] * b[j];
      const double bj = soft_threshold(rho, lambda[j]) / col_ss[j];
      const double delta = bj - b[j];
      if (delta != 0.0) {
        r -= delta * w.col(j);
        b[j] = bj;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    if (max_delta < tol) break;
  }
  return b;
}

// --- quadrature ---------------------------------------------------------------

// Composite Simpson integral of f over [lo, hi]; intervals must be even.
inline double simpson(const std::function<double(double)>& f, double lo,
                      double hi, int intervals) {
  const double h = (hi - lo) / intervals;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i)
    acc += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace oracles
