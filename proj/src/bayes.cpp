#include "kalkan/bayes.hpp"

#include <algorithm>
#include <cmath>

#include "kalkan/dense.hpp"
#include "kalkan/errors.hpp"

namespace kalkan {

namespace {

std::array<double, 2> class_log_priors(const std::vector<std::uint8_t>& y) {
  double n1 = 0.0;
  for (std::uint8_t v : y) n1 += v;
  const double n = static_cast<double>(y.size());
  return {std::log((n - n1) / n), std::log(n1 / n)};
}

void check_xy(const SparseMatrix& x, const std::vector<std::uint8_t>& y) {
  if (x.n_rows() != y.size())
    raise(ErrorKind::Shape, "row count does not match label count");
}

}  // namespace

double posterior_from_log_joint(const std::array<double, 2>& joint) {
  const double m = std::max(joint[0], joint[1]);
  const double e0 = std::exp(joint[0] - m);
  const double e1 = std::exp(joint[1] - m);
  return e1 / (e0 + e1);
}

MultinomialNbState fit_multinomial_nb(const SparseMatrix& x,
                                      const std::vector<std::uint8_t>& y,
                                      double alpha) {
  check_xy(x, y);
  if (!(alpha > 0.0)) raise(ErrorKind::Parameter, "alpha must be positive");
  const std::size_t v = x.n_features;

  MultinomialNbState m;
  m.alpha = alpha;
  m.log_prior = class_log_priors(y);

  std::array<std::vector<double>, 2> count{std::vector<double>(v, 0.0),
                                           std::vector<double>(v, 0.0)};
  std::array<double, 2> total{0.0, 0.0};
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    const int c = y[i];
    for (const auto& e : x.row(i)) {
      if (e.value < 0.0)
        raise(ErrorKind::Data, "multinomial model requires non-negative features");
      count[c][e.index] += e.value;
      total[c] += e.value;
    }
  }
  for (int c = 0; c < 2; ++c) {
    m.log_likelihood[c].resize(v);
    const double denom = total[c] + alpha * static_cast<double>(v);
    for (std::size_t t = 0; t < v; ++t)
      m.log_likelihood[c][t] = std::log((count[c][t] + alpha) / denom);
  }
  return m;
}

BernoulliNbState fit_bernoulli_nb(const SparseMatrix& x,
                                  const std::vector<std::uint8_t>& y,
                                  double alpha) {
  check_xy(x, y);
  if (!(alpha > 0.0)) raise(ErrorKind::Parameter, "alpha must be positive");
  const std::size_t v = x.n_features;

  BernoulliNbState m;
  m.alpha = alpha;
  m.log_prior = class_log_priors(y);

  std::array<std::vector<double>, 2> present{std::vector<double>(v, 0.0),
                                             std::vector<double>(v, 0.0)};
  std::array<double, 2> n_c{0.0, 0.0};
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    const int c = y[i];
    n_c[c] += 1.0;
    for (const auto& e : x.row(i))
      if (e.value > 0.0) present[c][e.index] += 1.0;
  }
  for (int c = 0; c < 2; ++c) {
    m.log_theta[c].resize(v);
    m.log_one_minus_theta[c].resize(v);
    const double denom = n_c[c] + 2.0 * alpha;
    for (std::size_t t = 0; t < v; ++t) {
      const double theta = (present[c][t] + alpha) / denom;
      m.log_theta[c][t] = std::log(theta);
      m.log_one_minus_theta[c][t] = std::log(1.0 - theta);
    }
  }
  return m;
}

GaussianNbState fit_gaussian_nb(const SparseMatrix& x,
                                const std::vector<std::uint8_t>& y,
                                std::size_t top_k) {
  check_xy(x, y);
  if (top_k < 1) raise(ErrorKind::Parameter, "top_k must be at least 1");

  GaussianNbState m;
  m.columns = top_k_by_document_frequency(x, top_k);
  m.log_prior = class_log_priors(y);
  const DenseMatrix d = densify(x, m.columns);
  const std::size_t k = d.cols();
  const std::size_t n = d.rows();

  // Global per-feature maximum-likelihood variance sets the clamping floor.
  std::vector<double> gmean(k, 0.0), gvar(k, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < k; ++j) gmean[j] += d.at(r, j);
  for (std::size_t j = 0; j < k; ++j) gmean[j] /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < k; ++j) {
      const double diff = d.at(r, j) - gmean[j];
      gvar[j] += diff * diff;
    }
  double max_var = 0.0;
  for (std::size_t j = 0; j < k; ++j)
    max_var = std::max(max_var, gvar[j] / static_cast<double>(n));
  const double floor = 1e-9 * (max_var > 0.0 ? max_var : 1.0);

  for (int c = 0; c < 2; ++c) {
    m.mean[c].assign(k, 0.0);
    m.var[c].assign(k, 0.0);
    double n_c = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (y[r] != c) continue;
      n_c += 1.0;
      for (std::size_t j = 0; j < k; ++j) m.mean[c][j] += d.at(r, j);
    }
    for (std::size_t j = 0; j < k; ++j) m.mean[c][j] /= n_c;
    for (std::size_t r = 0; r < n; ++r) {
      if (y[r] != c) continue;
      for (std::size_t j = 0; j < k; ++j) {
        const double diff = d.at(r, j) - m.mean[c][j];
        m.var[c][j] += diff * diff;
      }
    }
    for (std::size_t j = 0; j < k; ++j)
      m.var[c][j] = std::max(m.var[c][j] / n_c, floor);
  }
  return m;
}

std::array<double, 2> nb_log_joint(const MultinomialNbState& m, const SparseVector& x) {
  std::array<double, 2> joint{m.log_prior[0], m.log_prior[1]};
  for (const auto& e : x.entries) {
    if (e.index >= m.log_likelihood[0].size())
      raise(ErrorKind::Shape, "feature index outside model dimension");
    joint[0] += e.value * m.log_likelihood[0][e.index];
    joint[1] += e.value * m.log_likelihood[1][e.index];
  }
  return joint;
}

std::array<double, 2> nb_log_joint(const BernoulliNbState& m, const SparseVector& x) {
  const std::size_t v = m.log_theta[0].size();
  // Start from the all-absent sum, then adjust the present features.
  std::array<double, 2> joint{m.log_prior[0], m.log_prior[1]};
  for (int c = 0; c < 2; ++c)
    for (std::size_t t = 0; t < v; ++t) joint[c] += m.log_one_minus_theta[c][t];
  for (const auto& e : x.entries) {
    if (e.index >= v) raise(ErrorKind::Shape, "feature index outside model dimension");
    if (e.value > 0.0)
      for (int c = 0; c < 2; ++c)
        joint[c] += m.log_theta[c][e.index] - m.log_one_minus_theta[c][e.index];
  }
  return joint;
}

namespace {

std::array<double, 2> gaussian_log_joint_dense(const GaussianNbState& m,
                                               const double* row, std::size_t k) {
  constexpr double kLog2Pi = 1.8378770664093453;
  std::array<double, 2> joint{m.log_prior[0], m.log_prior[1]};
  for (int c = 0; c < 2; ++c)
    for (std::size_t j = 0; j < k; ++j) {
      const double var = m.var[c][j];
      const double diff = row[j] - m.mean[c][j];
      joint[c] -= 0.5 * (kLog2Pi + std::log(var) + diff * diff / var);
    }
  return joint;
}

}  // namespace

std::array<double, 2> nb_log_joint(const GaussianNbState& m, const SparseVector& x) {
  const std::size_t k = m.columns.size();
  std::vector<double> row(k, 0.0);
  std::size_t p = 0;
  for (const auto& e : x.entries) {
    while (p < k && m.columns[p] < e.index) ++p;
    if (p < k && m.columns[p] == e.index) row[p] = e.value;
  }
  return gaussian_log_joint_dense(m, row.data(), k);
}

std::vector<double> predict_proba(const MultinomialNbState& m, const SparseMatrix& x) {
  std::vector<double> out(x.n_rows());
  for (std::size_t i = 0; i < x.n_rows(); ++i)
    out[i] = posterior_from_log_joint(nb_log_joint(m, x.row(i)));
  return out;
}

std::vector<double> predict_proba(const BernoulliNbState& m, const SparseMatrix& x) {
  const std::size_t v = m.log_theta[0].size();
  std::array<double, 2> absent{0.0, 0.0};
  for (int c = 0; c < 2; ++c)
    for (std::size_t t = 0; t < v; ++t) absent[c] += m.log_one_minus_theta[c][t];

  std::vector<double> out(x.n_rows());
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    std::array<double, 2> joint{m.log_prior[0] + absent[0], m.log_prior[1] + absent[1]};
    for (const auto& e : x.row(i)) {
      if (e.index >= v) raise(ErrorKind::Shape, "feature index outside model dimension");
      if (e.value > 0.0)
        for (int c = 0; c < 2; ++c)
          joint[c] += m.log_theta[c][e.index] - m.log_one_minus_theta[c][e.index];
    }
    out[i] = posterior_from_log_joint(joint);
  }
  return out;
}

std::vector<double> predict_proba(const GaussianNbState& m, const SparseMatrix& x) {
  const DenseMatrix d = densify(x, m.columns);
  std::vector<double> out(x.n_rows());
  for (std::size_t i = 0; i < x.n_rows(); ++i)
    out[i] = posterior_from_log_joint(
        gaussian_log_joint_dense(m, d.row(i), d.cols()));
  return out;
}

}  // namespace kalkan
