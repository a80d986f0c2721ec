#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kalkan/sparse.hpp"

namespace kalkan {

// Multinomial Naive Bayes with Laplace smoothing:
//   likelihood(t|c) = (count(t,c) + alpha) / (total(c) + alpha * V).
// Per-label likelihoods sum to 1 exactly by construction.
struct MultinomialNbState {
  double alpha = 1.0;
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> log_likelihood;  // per label, length V
};

MultinomialNbState fit_multinomial_nb(const SparseMatrix& x,
                                      const std::vector<std::uint8_t>& y,
                                      double alpha);

// Bernoulli Naive Bayes on presence indicators (value > 0):
//   theta(t|c) = (docs_with(t,c) + alpha) / (n_c + 2 * alpha), always in (0,1).
struct BernoulliNbState {
  double alpha = 1.0;
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> log_theta;
  std::array<std::vector<double>, 2> log_one_minus_theta;
};

BernoulliNbState fit_bernoulli_nb(const SparseMatrix& x,
                                  const std::vector<std::uint8_t>& y,
                                  double alpha);

// Gaussian Naive Bayes on a dense top-k feature projection. Variances are
// maximum likelihood, clamped below by 1e-9 times the largest per-feature
// variance over all rows (or 1e-9 when that is zero).
struct GaussianNbState {
  std::vector<std::uint32_t> columns;  // projected feature indices, ascending
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> mean;
  std::array<std::vector<double>, 2> var;
};

GaussianNbState fit_gaussian_nb(const SparseMatrix& x,
                                const std::vector<std::uint8_t>& y,
                                std::size_t top_k);

// Per-label log joints log p(c) + log p(x|c). An all-zero document under the
// multinomial model scores the log priors exactly.
std::array<double, 2> nb_log_joint(const MultinomialNbState& m, const SparseVector& x);
std::array<double, 2> nb_log_joint(const BernoulliNbState& m, const SparseVector& x);
std::array<double, 2> nb_log_joint(const GaussianNbState& m, const SparseVector& x);

// P(label 1) per row via normalized exponentiated log joints.
std::vector<double> predict_proba(const MultinomialNbState& m, const SparseMatrix& x);
std::vector<double> predict_proba(const BernoulliNbState& m, const SparseMatrix& x);
std::vector<double> predict_proba(const GaussianNbState& m, const SparseMatrix& x);

// Shared by every family: P(1) from two log joints with the log-sum-exp trick.
double posterior_from_log_joint(const std::array<double, 2>& joint);

}  // namespace kalkan
