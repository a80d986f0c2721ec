#include "kalkan/discriminant.hpp"

#include <algorithm>
#include <cmath>

#include "kalkan/bayes.hpp"
#include "kalkan/errors.hpp"

namespace kalkan {

namespace {

struct ClassSplit {
  std::array<std::vector<std::size_t>, 2> rows;
};

ClassSplit split_rows(const std::vector<std::uint8_t>& y) {
  ClassSplit s;
  for (std::size_t i = 0; i < y.size(); ++i) s.rows[y[i] ? 1 : 0].push_back(i);
  return s;
}

void check_finite(const DenseMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m.at(i, j)))
        raise(ErrorKind::Data, "covariance has non-finite entries");
}

DenseMatrix identity_scaled(std::size_t k, double v) {
  DenseMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) m.at(i, i) = v;
  return m;
}

}  // namespace

DiscriminantState fit_lda(const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                          std::size_t top_k, double shrinkage) {
  if (x.n_rows() != y.size())
    raise(ErrorKind::Shape, "row count does not match label count");
  if (shrinkage < 0.0 || shrinkage > 1.0)
    raise(ErrorKind::Parameter, "shrinkage must be in [0, 1]");

  DiscriminantState m;
  m.quadratic = false;
  m.columns = top_k_by_document_frequency(x, top_k);
  const DenseMatrix d = densify(x, m.columns);
  const std::size_t k = d.cols();
  const std::size_t n = d.rows();
  const ClassSplit split = split_rows(y);
  const double n0 = static_cast<double>(split.rows[0].size());
  const double n1 = static_cast<double>(split.rows[1].size());
  m.log_prior = {std::log(n0 / static_cast<double>(n)),
                 std::log(n1 / static_cast<double>(n))};

  DenseMatrix cov;
  if (split.rows[0].size() < 2 || split.rows[1].size() < 2 || n < 3) {
    cov = identity_scaled(k, 1e-6);
    m.mean[0] = column_mean(d, split.rows[0]);
    m.mean[1] = column_mean(d, split.rows[1]);
  } else {
    m.mean[0] = column_mean(d, split.rows[0]);
    m.mean[1] = column_mean(d, split.rows[1]);
    const DenseMatrix s0 = scatter(d, split.rows[0], m.mean[0]);
    const DenseMatrix s1 = scatter(d, split.rows[1], m.mean[1]);
    cov = DenseMatrix(k, k);
    const double denom = static_cast<double>(n) - 2.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        cov.at(i, j) = (s0.at(i, j) + s1.at(i, j)) / denom;
    if (shrinkage > 0.0) {
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          if (i != j) cov.at(i, j) *= (1.0 - shrinkage);
    }
    double max_diag = 0.0;
    for (std::size_t i = 0; i < k; ++i) max_diag = std::max(max_diag, cov.at(i, i));
    const double jitter = 1e-8 * std::max(1.0, max_diag);
    for (std::size_t i = 0; i < k; ++i) cov.at(i, i) += jitter;
  }
  check_finite(cov);
  cholesky_in_place(cov);
  m.log_det.push_back(log_det_from_cholesky(cov));
  m.chol.push_back(std::move(cov));
  return m;
}

DiscriminantState fit_qda(const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                          std::size_t top_k, double ridge) {
  if (x.n_rows() != y.size())
    raise(ErrorKind::Shape, "row count does not match label count");
  if (ridge < 0.0) raise(ErrorKind::Parameter, "ridge must be non-negative");

  DiscriminantState m;
  m.quadratic = true;
  m.columns = top_k_by_document_frequency(x, top_k);
  const DenseMatrix d = densify(x, m.columns);
  const std::size_t k = d.cols();
  const std::size_t n = d.rows();
  const ClassSplit split = split_rows(y);
  const double n0 = static_cast<double>(split.rows[0].size());
  const double n1 = static_cast<double>(split.rows[1].size());
  m.log_prior = {std::log(n0 / static_cast<double>(n)),
                 std::log(n1 / static_cast<double>(n))};

  for (int c = 0; c < 2; ++c) {
    m.mean[c] = column_mean(d, split.rows[c]);
    DenseMatrix cov;
    if (split.rows[c].size() < 2) {
      cov = identity_scaled(k, 1e-6);
    } else {
      cov = scatter(d, split.rows[c], m.mean[c]);
      const double denom = static_cast<double>(split.rows[c].size()) - 1.0;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) cov.at(i, j) /= denom;
      for (std::size_t i = 0; i < k; ++i) cov.at(i, i) += ridge;
    }
    check_finite(cov);
    cholesky_in_place(cov);
    m.log_det.push_back(log_det_from_cholesky(cov));
    m.chol.push_back(std::move(cov));
  }
  return m;
}

std::vector<double> predict_proba(const DiscriminantState& m, const SparseMatrix& x) {
  const DenseMatrix d = densify(x, m.columns);
  const std::size_t k = d.cols();
  std::vector<double> out(x.n_rows());
  std::vector<double> diff(k), z(k);
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    std::array<double, 2> joint{};
    for (int c = 0; c < 2; ++c) {
      const DenseMatrix& l = m.chol[m.chol.size() == 1 ? 0 : c];
      const double log_det = m.log_det[m.log_det.size() == 1 ? 0 : c];
      for (std::size_t j = 0; j < k; ++j) diff[j] = d.at(i, j) - m.mean[c][j];
      forward_solve(l, diff.data(), z.data());
      double maha = 0.0;
      for (std::size_t j = 0; j < k; ++j) maha += z[j] * z[j];
      joint[c] = m.log_prior[c] - 0.5 * (log_det + maha);
    }
    out[i] = posterior_from_log_joint(joint);
  }
  return out;
}

}  // namespace kalkan
