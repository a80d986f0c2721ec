#include "kalkan/dense.hpp"

#include <algorithm>
#include <cmath>

#include "kalkan/errors.hpp"
#include "kalkan/parallel.hpp"

namespace kalkan {

std::vector<std::uint32_t> top_k_by_document_frequency(const SparseMatrix& x,
                                                       std::size_t k) {
  std::vector<std::uint64_t> df(x.n_features, 0);
  for (std::size_t r = 0; r < x.n_rows(); ++r)
    for (const auto& e : x.row(r)) df[e.index] += 1;

  std::vector<std::uint32_t> order(x.n_features);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (df[a] != df[b]) return df[a] > df[b];
    return a < b;
  });
  if (order.size() > k) order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

DenseMatrix densify(const SparseMatrix& x, const std::vector<std::uint32_t>& columns) {
  // columns is sorted ascending; map original index -> dense position.
  std::vector<std::int64_t> position(x.n_features, -1);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] >= x.n_features)
      raise(ErrorKind::Shape, "densify column index outside matrix");
    position[columns[j]] = static_cast<std::int64_t>(j);
  }
  DenseMatrix out(x.n_rows(), columns.size());
  parallel_for(static_cast<std::ptrdiff_t>(x.n_rows()), [&](std::ptrdiff_t r) {
    double* dst = out.row(static_cast<std::size_t>(r));
    for (const auto& e : x.row(static_cast<std::size_t>(r))) {
      const std::int64_t p = position[e.index];
      if (p >= 0) dst[p] = e.value;
    }
  });
  return out;
}

std::vector<double> column_mean(const DenseMatrix& x,
                                const std::vector<std::size_t>& rows) {
  std::vector<double> mean(x.cols(), 0.0);
  if (rows.empty()) return mean;
  for (std::size_t r : rows) {
    const double* src = x.row(r);
    for (std::size_t c = 0; c < x.cols(); ++c) mean[c] += src[c];
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (double& v : mean) v *= inv;
  return mean;
}

namespace {

constexpr std::size_t kTile = 64;

// Accumulates one output tile over all listed rows, in list order. Shared by
// the parallel and serial versions so both produce the same add sequence per
// element, which makes them bit-identical.
void scatter_tile(const DenseMatrix& x, const std::vector<std::size_t>& rows,
                  const std::vector<double>& mean, DenseMatrix& out,
                  std::size_t i0, std::size_t j0) {
  const std::size_t n = x.cols();
  const std::size_t i1 = std::min(i0 + kTile, n);
  const std::size_t j1 = std::min(j0 + kTile, n);
  for (std::size_t r : rows) {
    const double* xr = x.row(r);
    for (std::size_t i = i0; i < i1; ++i) {
      const double di = xr[i] - mean[i];
      double* orow = out.row(i);
      for (std::size_t j = j0; j < j1; ++j) orow[j] += di * (xr[j] - mean[j]);
    }
  }
}

}  // namespace

DenseMatrix scatter(const DenseMatrix& x, const std::vector<std::size_t>& rows,
                    const std::vector<double>& mean) {
  const std::size_t n = x.cols();
  DenseMatrix out(n, n);
  const std::size_t tiles = (n + kTile - 1) / kTile;
  parallel_for(static_cast<std::ptrdiff_t>(tiles * tiles), [&](std::ptrdiff_t t) {
    const std::size_t ti = static_cast<std::size_t>(t) / tiles;
    const std::size_t tj = static_cast<std::size_t>(t) % tiles;
    scatter_tile(x, rows, mean, out, ti * kTile, tj * kTile);
  });
  return out;
}

namespace reference {

DenseMatrix scatter(const DenseMatrix& x, const std::vector<std::size_t>& rows,
                    const std::vector<double>& mean) {
  const std::size_t n = x.cols();
  DenseMatrix out(n, n);
  const std::size_t tiles = (n + kTile - 1) / kTile;
  for (std::size_t ti = 0; ti < tiles; ++ti)
    for (std::size_t tj = 0; tj < tiles; ++tj)
      scatter_tile(x, rows, mean, out, ti * kTile, tj * kTile);
  return out;
}

}  // namespace reference

void cholesky_in_place(DenseMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) raise(ErrorKind::Shape, "cholesky needs a square matrix");
  for (std::size_t k = 0; k < n; ++k) {
    const double pivot = a.at(k, k);
    if (!(pivot > 0.0))
      raise(ErrorKind::Data, "matrix is not positive definite");
    const double lkk = std::sqrt(pivot);
    a.at(k, k) = lkk;
    for (std::size_t i = k + 1; i < n; ++i) a.at(i, k) /= lkk;
    // Trailing update, one column per loop index so threads never share an
    // output element.
    parallel_for(static_cast<std::ptrdiff_t>(n - (k + 1)), [&](std::ptrdiff_t off) {
      const std::size_t j = k + 1 + static_cast<std::size_t>(off);
      const double ljk = a.at(j, k);
      for (std::size_t i = j; i < n; ++i) a.at(i, j) -= a.at(i, k) * ljk;
    });
  }
}

void forward_solve(const DenseMatrix& l, const double* b, double* y) {
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    const double* li = l.row(i);
    for (std::size_t j = 0; j < i; ++j) s -= li[j] * y[j];
    y[i] = s / li[i];
  }
}

void backward_solve(const DenseMatrix& l, const double* y, double* x) {
  const std::size_t n = l.rows();
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= l.at(j, ii) * x[j];
    x[ii] = s / l.at(ii, ii);
  }
}

double log_det_from_cholesky(const DenseMatrix& l) {
  double s = 0.0;
  for (std::size_t i = 0; i < l.rows(); ++i) s += std::log(l.at(i, i));
  return 2.0 * s;
}

}  // namespace kalkan
