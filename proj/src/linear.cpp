#include "kalkan/linear.hpp"

#include <algorithm>
#include <cmath>

#include "kalkan/errors.hpp"
#include "kalkan/random.hpp"

namespace kalkan {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double log1p_exp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

}  // namespace

double decision_value(const LinearState& m, const SparseVector& row) {
  double z = m.b;
  for (const auto& e : row.entries) {
    if (e.index >= m.w.size())
      raise(ErrorKind::Shape, "feature index outside weight vector");
    z += m.w[e.index] * e.value;
  }
  return z;
}

LinearState fit_linear(LinearLoss loss, const SparseMatrix& x,
                       const std::vector<std::uint8_t>& y, double lambda,
                       std::int64_t epochs, double eta0, std::uint64_t seed,
                       LinearFitTrace* trace) {
  if (x.n_rows() != y.size())
    raise(ErrorKind::Shape, "row count does not match label count");
  if (epochs < 1) raise(ErrorKind::Parameter, "epochs must be at least 1");
  if (!(eta0 > 0.0)) raise(ErrorKind::Parameter, "eta0 must be positive");
  if (lambda < 0.0) raise(ErrorKind::Parameter, "lambda must be non-negative");

  const std::size_t n = x.n_rows();
  const std::size_t v = x.n_features;
  LinearState m;
  m.w.assign(v, 0.0);

  // Averaged iterate for the trace objective.
  std::vector<double> avg_w(v, 0.0);
  double avg_b = 0.0;
  std::uint64_t updates = 0;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  SplitMix64 rng(seed);

  for (std::int64_t epoch = 0; epoch < epochs; ++epoch) {
    seeded_shuffle(order, rng);
    for (std::size_t pos = 0; pos < n; ++pos) {
      const std::size_t i = order[pos];
      const SparseVector& xi = x.row(i);
      const double target = y[i] ? 1.0 : -1.0;
      const double z = decision_value(m, xi);

      if (loss == LinearLoss::perceptron) {
        if (target * z <= 0.0) {
          for (const auto& e : xi.entries) m.w[e.index] += eta0 * target * e.value;
          m.b += eta0 * target;
        }
      } else {
        const double eta =
            eta0 / (1.0 + eta0 * lambda * static_cast<double>(updates));
        const double decay = 1.0 - eta * lambda;
        if (decay != 1.0)
          for (double& wj : m.w) wj *= decay;
        if (loss == LinearLoss::logistic) {
          // d/dz log(1 + exp(-t z)) = -t * sigmoid(-t z)
          const double g = -target * sigmoid(-target * z);
          if (g != 0.0) {
            for (const auto& e : xi.entries) m.w[e.index] -= eta * g * e.value;
            m.b -= eta * g;
          }
        } else {  // hinge
          if (target * z < 1.0) {
            for (const auto& e : xi.entries) m.w[e.index] += eta * target * e.value;
            m.b += eta * target;
          }
        }
      }

      ++updates;
      const double inv = 1.0 / static_cast<double>(updates);
      for (std::size_t j = 0; j < v; ++j) avg_w[j] += (m.w[j] - avg_w[j]) * inv;
      avg_b += (m.b - avg_b) * inv;
    }

    if (trace) {
      double obj;
      if (loss == LinearLoss::logistic) {
        obj = logistic_objective(avg_w, avg_b, x, y, lambda);
      } else if (loss == LinearLoss::hinge) {
        obj = hinge_objective(avg_w, avg_b, x, y, lambda);
      } else {
        std::size_t mistakes = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const double t = y[i] ? 1.0 : -1.0;
          if (t * decision_value(m, x.row(i)) <= 0.0) ++mistakes;
        }
        obj = static_cast<double>(mistakes) / static_cast<double>(n);
      }
      trace->epoch_objective.push_back(obj);
    }
  }
  return m;
}

double logistic_objective(const std::vector<double>& w, double b,
                          const SparseMatrix& x,
                          const std::vector<std::uint8_t>& y, double lambda) {
  const std::size_t n = x.n_rows();
  LinearState view{w, b};
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = y[i] ? 1.0 : -1.0;
    loss += log1p_exp(-t * decision_value(view, x.row(i)));
  }
  loss /= static_cast<double>(n);
  double reg = 0.0;
  for (double wj : w) reg += wj * wj;
  return loss + 0.5 * lambda * reg;
}

void logistic_gradient(const std::vector<double>& w, double b,
                       const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                       double lambda, std::vector<double>* grad_w, double* grad_b) {
  const std::size_t n = x.n_rows();
  LinearState view{w, b};
  grad_w->assign(w.size(), 0.0);
  *grad_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = y[i] ? 1.0 : -1.0;
    const double g = -t * sigmoid(-t * decision_value(view, x.row(i)));
    for (const auto& e : x.row(i).entries) (*grad_w)[e.index] += g * e.value;
    *grad_b += g;
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < w.size(); ++j)
    (*grad_w)[j] = (*grad_w)[j] * inv + lambda * w[j];
  *grad_b *= inv;
}

double hinge_objective(const std::vector<double>& w, double b,
                       const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                       double lambda) {
  const std::size_t n = x.n_rows();
  LinearState view{w, b};
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = y[i] ? 1.0 : -1.0;
    loss += std::max(0.0, 1.0 - t * decision_value(view, x.row(i)));
  }
  loss /= static_cast<double>(n);
  double reg = 0.0;
  for (double wj : w) reg += wj * wj;
  return loss + 0.5 * lambda * reg;
}

std::vector<double> predict_proba(const LinearState& m, const SparseMatrix& x) {
  std::vector<double> out(x.n_rows());
  for (std::size_t i = 0; i < x.n_rows(); ++i)
    out[i] = sigmoid(decision_value(m, x.row(i)));
  return out;
}

}  // namespace kalkan
