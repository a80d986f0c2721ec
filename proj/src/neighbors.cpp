#include "kalkan/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "kalkan/errors.hpp"
#include "kalkan/parallel.hpp"

namespace kalkan {

KnnDistance parse_knn_distance(const std::string& name) {
  if (name == "cosine") return KnnDistance::cosine;
  if (name == "euclidean") return KnnDistance::euclidean;
  raise(ErrorKind::Parameter, "unknown distance: " + name);
}

std::string to_string(KnnDistance d) {
  return d == KnnDistance::cosine ? "cosine" : "euclidean";
}

KnnState fit_knn(const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                 std::int64_t k, KnnDistance distance) {
  if (k < 1) raise(ErrorKind::Parameter, "k must be at least 1");
  if (k > static_cast<std::int64_t>(x.n_rows())) {
    raise(ErrorKind::Parameter, "k exceeds the number of training rows");
  }
  KnnState state;
  state.k = k;
  state.distance = distance;
  state.rows.reserve(x.n_rows());
  for (std::size_t i = 0; i < x.n_rows(); ++i) state.rows.push_back(x.row(i));
  state.labels = y;
  return state;
}

double knn_distance(KnnDistance kind, const SparseVector& a,
                    const SparseVector& b) {
  if (kind == KnnDistance::cosine) {
    const double na = a.l2_norm();
    const double nb = b.l2_norm();
    if (na == 0.0 || nb == 0.0) return 1.0;
    return 1.0 - a.dot(b) / (na * nb);
  }
  const double sq = a.l2_norm_squared() + b.l2_norm_squared() - 2.0 * a.dot(b);
  return std::sqrt(std::max(sq, 0.0));
}

std::vector<double> predict_proba(const KnnState& m, const SparseMatrix& x) {
  std::vector<double> out(x.n_rows(), 0.0);
  const std::size_t n_train = m.rows.size();
  parallel_for(static_cast<std::ptrdiff_t>(x.n_rows()), [&](std::size_t q) {
    std::vector<std::pair<double, std::uint32_t>> order(n_train);
    const SparseVector& query = x.row(q);
    for (std::uint32_t i = 0; i < n_train; ++i) {
      order[i] = {knn_distance(m.distance, query, m.rows[i]), i};
    }
    const std::size_t k = static_cast<std::size_t>(m.k);
    std::partial_sort(order.begin(), order.begin() + k, order.end());
    double positives = 0.0;
    for (std::size_t i = 0; i < k; ++i) positives += m.labels[order[i].second];
    out[q] = positives / static_cast<double>(k);
  });
  return out;
}

}  // namespace kalkan
