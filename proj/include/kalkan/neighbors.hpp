#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kalkan/sparse.hpp"

namespace kalkan {

enum class KnnDistance { cosine, euclidean };

KnnDistance parse_knn_distance(const std::string& name);
std::string to_string(KnnDistance d);

// Memorized training set. Queries take the fraction of positive labels among
// the k nearest rows; ties at the k-th distance go to the lower training
// index.
struct KnnState {
  std::int64_t k = 5;
  KnnDistance distance = KnnDistance::cosine;
  std::vector<SparseVector> rows;
  std::vector<std::uint8_t> labels;
};

KnnState fit_knn(const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                 std::int64_t k, KnnDistance distance);

// Cosine distance is 1 - cos similarity, with all-zero vectors at distance 1
// from everything.
double knn_distance(KnnDistance kind, const SparseVector& a,
                    const SparseVector& b);

std::vector<double> predict_proba(const KnnState& m, const SparseMatrix& x);

}  // namespace kalkan
