#include "blr/noise.hpp"

#include <cmath>
#include <string>

namespace blr {

NoiseModel NoiseModel::iid(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw InvalidArgument("iid noise variance must be positive and finite");
  NoiseModel m;
  m.kind_ = Kind::iid;
  m.sigma2_ = sigma2;
  return m;
}

NoiseModel NoiseModel::diagonal(Vector variances) {
  if (variances.size() == 0)
    throw InvalidArgument("diagonal noise needs at least one variance");
  for (int i = 0; i < variances.size(); ++i) {
    if (!(variances[i] > 0.0) || !std::isfinite(variances[i]))
      throw InvalidArgument("diagonal noise variances must be positive and finite");
  }
  NoiseModel m;
  m.kind_ = Kind::diagonal;
  m.variances_ = std::move(variances);
  return m;
}

NoiseModel NoiseModel::full(SpdMatrix c, const NumericPolicy& policy) {
  NoiseModel m;
  m.kind_ = Kind::full;
  m.cov_ = std::move(c);
  m.factor_ = factor(m.cov_, policy);  // throws NotPositiveDefinite if invalid
  return m;
}

std::optional<int> NoiseModel::rows() const {
  switch (kind_) {
    case Kind::iid: return std::nullopt;
    case Kind::diagonal: return static_cast<int>(variances_.size());
    case Kind::full: return cov_.size();
  }
  return std::nullopt;
}

double NoiseModel::sigma2() const {
  if (kind_ != Kind::iid) throw InvalidArgument("sigma2() requires iid noise");
  return sigma2_;
}

const Vector& NoiseModel::variances() const {
  if (kind_ != Kind::diagonal)
    throw InvalidArgument("variances() requires diagonal noise");
  return variances_;
}

const SpdMatrix& NoiseModel::covariance() const {
  if (kind_ != Kind::full) throw InvalidArgument("covariance() requires full noise");
  return cov_;
}

void NoiseModel::check_rows(Eigen::Index n) const {
  const auto pinned = rows();
  if (pinned && *pinned != n)
    throw DimensionMismatch("noise model covers " + std::to_string(*pinned) +
                            " rows, operand has " + std::to_string(n));
}

double NoiseModel::log_det(int n) const {
  check_rows(n);
  switch (kind_) {
    case Kind::iid: return n * std::log(sigma2_);
    case Kind::diagonal: return variances_.array().log().sum();
    case Kind::full: return factor_->log_det();
  }
  return 0.0;
}

Matrix NoiseModel::whiten(const ConstMatrixRef& v) const {
  check_rows(v.rows());
  switch (kind_) {
    case Kind::iid: return v / std::sqrt(sigma2_);
    case Kind::diagonal:
      return v.array().colwise() / variances_.array().sqrt();
    case Kind::full: return factor_->forward_solve(v);
  }
  return v;
}

Matrix NoiseModel::apply_inverse(const ConstMatrixRef& v) const {
  check_rows(v.rows());
  switch (kind_) {
    case Kind::iid: return v / sigma2_;
    case Kind::diagonal: return v.array().colwise() / variances_.array();
    case Kind::full: return factor_->solve(v);
  }
  return v;
}

NoiseModel NoiseModel::resample(const std::vector<int>& idx) const {
  switch (kind_) {
    case Kind::iid: return *this;
    case Kind::diagonal: {
      Vector v(static_cast<Eigen::Index>(idx.size()));
      for (std::size_t i = 0; i < idx.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = variances_[idx[i]];
      return diagonal(std::move(v));
    }
    case Kind::full: {
      const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
      Matrix sub(m, m);
      for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index c = 0; c < m; ++c)
          sub(r, c) = cov_.values()(idx[static_cast<std::size_t>(r)],
                                    idx[static_cast<std::size_t>(c)]);
      // Repeated rows make this singular; full() then throws and the
      // bootstrap replicate is skipped.
      return full(SpdMatrix(sub));
    }
  }
  return *this;
}

double NoiseModel::row_variance(int i) const {
  const auto pinned = rows();
  if (pinned && (i < 0 || i >= *pinned))
    throw DimensionMismatch("noise row index out of range");
  switch (kind_) {
    case Kind::iid: return sigma2_;
    case Kind::diagonal: return variances_[i];
    case Kind::full: return cov_.values()(i, i);
  }
  return sigma2_;
}

}  // namespace blr
