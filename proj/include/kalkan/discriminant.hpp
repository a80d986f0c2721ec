#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kalkan/dense.hpp"
#include "kalkan/sparse.hpp"

namespace kalkan {

// LDA/QDA on the dense top-k projection. Scoring uses the Gaussian
// discriminant log_prior - (log|S| + mahalanobis)/2 with the Cholesky factor
// stored per label (LDA stores the pooled factor once); probabilities are the
// normalized exponentiated discriminants. The shared 2*pi constant cancels.
struct DiscriminantState {
  bool quadratic = false;
  std::vector<std::uint32_t> columns;
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> mean;
  std::vector<DenseMatrix> chol;   // size 1 when pooled (lda), else 2
  std::vector<double> log_det;     // aligned with chol
};

// Pooled covariance scatter/(n-2), shrunk toward its diagonal by delta, plus
// a 1e-8 * max(1, max diagonal) jitter so factorization cannot hit an exact
// zero pivot. Fewer than 2 rows per label falls back to 1e-6 * I.
DiscriminantState fit_lda(const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                          std::size_t top_k, double shrinkage);

// Per-label covariance scatter/(n_c-1) with ridge * I added to the diagonal.
// Fewer than 2 rows in a label falls back to 1e-6 * I for that label.
DiscriminantState fit_qda(const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                          std::size_t top_k, double ridge);

std::vector<double> predict_proba(const DiscriminantState& m, const SparseMatrix& x);

}  // namespace kalkan
