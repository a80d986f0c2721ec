#pragma once

#include <cstdint>
#include <vector>

#include "kalkan/sparse.hpp"

namespace kalkan {

enum class LinearLoss { logistic, hinge, perceptron };

// Shared state for logistic regression, linear SVC, perceptron and the
// configurable-loss SGD kind. Probabilities come from sigmoid(w.x + b);
// margin losses are uncalibrated but sign-consistent.
struct LinearState {
  std::vector<double> w;
  double b = 0.0;
};

// Per-epoch objective evaluated at the averaged iterate (mean of all SGD
// iterates so far). For the perceptron the entry is the training mistake
// fraction of the current iterate instead.
struct LinearFitTrace {
  std::vector<double> epoch_objective;
};

// SGD over `epochs` full passes, sample order reshuffled each epoch from the
// seed. Learning rate eta_t = eta0 / (1 + eta0 * lambda * t) with t counting
// updates from 0. Logistic and hinge apply L2 decay (bias unregularized);
// the perceptron uses the classic mistake-driven update at constant eta0 and
// ignores lambda.
LinearState fit_linear(LinearLoss loss, const SparseMatrix& x,
                       const std::vector<std::uint8_t>& y, double lambda,
                       std::int64_t epochs, double eta0, std::uint64_t seed,
                       LinearFitTrace* trace = nullptr);

// Regularized logistic objective: mean cross-entropy + (lambda/2) * ||w||^2.
double logistic_objective(const std::vector<double>& w, double b,
                          const SparseMatrix& x,
                          const std::vector<std::uint8_t>& y, double lambda);

// Exact gradient of the objective above; grad_w has |w| entries, grad_b is
// the bias derivative. Checked against central finite differences in tests.
void logistic_gradient(const std::vector<double>& w, double b,
                       const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                       double lambda, std::vector<double>* grad_w, double* grad_b);

// Regularized mean hinge loss, used by the epoch-monotonicity trace.
double hinge_objective(const std::vector<double>& w, double b,
                       const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                       double lambda);

std::vector<double> predict_proba(const LinearState& m, const SparseMatrix& x);

double decision_value(const LinearState& m, const SparseVector& row);

}  // namespace kalkan
