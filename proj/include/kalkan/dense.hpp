#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "kalkan/sparse.hpp"

namespace kalkan {

// Row-major dense matrix. Minimal by design: the dense models only need
// storage, scatter accumulation and triangular solves.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double* row(std::size_t r) { return data_.data() + r * cols_; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Columns with the highest nonzero count, capped at k. Ties broken by lower
// column index; the returned list is sorted ascending so gathers are stable.
std::vector<std::uint32_t> top_k_by_document_frequency(const SparseMatrix& x,
                                                       std::size_t k);

// Gathers the given columns of a sparse matrix into dense storage.
DenseMatrix densify(const SparseMatrix& x, const std::vector<std::uint32_t>& columns);

// Mean of the listed rows, one value per column. Empty selection gives zeros.
std::vector<double> column_mean(const DenseMatrix& x,
                                const std::vector<std::size_t>& rows);

// Scatter matrix sum_r (x_r - mean)(x_r - mean)^T over the listed rows.
// Parallelised over 64x64 output tiles; every element accumulates over rows
// in list order regardless of thread count, so the result is bit-identical
// to the serial reference.
DenseMatrix scatter(const DenseMatrix& x, const std::vector<std::size_t>& rows,
                    const std::vector<double>& mean);

namespace reference {
DenseMatrix scatter(const DenseMatrix& x, const std::vector<std::size_t>& rows,
                    const std::vector<double>& mean);
}  // namespace reference

// In-place Cholesky factorization A = L L^T of a symmetric positive definite
// matrix; on return the lower triangle of a holds L (upper left untouched
// values above the diagonal are ignored by the solvers). Trailing-column
// updates run in parallel, one column per loop index. Raises a Data error
// when a pivot is not strictly positive.
void cholesky_in_place(DenseMatrix& a);

// Solve L y = b (forward) and L^T x = y (backward) for the factor above.
void forward_solve(const DenseMatrix& l, const double* b, double* y);
void backward_solve(const DenseMatrix& l, const double* y, double* x);

// log(det(A)) = 2 * sum_i log(L_ii) for the factor above.
double log_det_from_cholesky(const DenseMatrix& l);

}  // namespace kalkan
