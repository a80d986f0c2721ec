#pragma once

#include <cstdint>
#include <vector>

#include "kalkan/model.hpp"
#include "kalkan/sparse.hpp"

namespace kalkan {

// Mean cross-validation scores of one grid point, with the per-fold values
// kept for inspection.
struct CvCell {
  ParamMap params;
  double mean_f1 = 0.0;
  double mean_accuracy = 0.0;
  std::vector<double> fold_f1;
  std::vector<double> fold_accuracy;
};

struct GridSearchResult {
  ClassifierSpec best;
  std::vector<CvCell> table;  // one cell per grid point, in grid order
};

// Deterministic stratified k-fold assignment: per label, indices are
// shuffled with mix_seed(seed, label) and dealt round-robin to folds. The
// returned lists are ascending row indices per fold.
std::vector<std::vector<std::uint32_t>> stratified_folds(
    const std::vector<std::uint8_t>& y, std::int64_t folds, std::uint64_t seed);

// Small default grid per kind (at most 6 points), expressed as override maps
// against the kind's default parameters.
std::vector<ParamMap> default_grid(ModelKind kind);

// Exhaustive cross-validated search over `grid` on the given training data
// only. Each (point, fold) fit uses mix_seed(seed, fold). Selection: highest
// mean positive-class F1, ties broken by higher mean accuracy, then by
// earlier grid position. Empty grids and folds < 2 are parameter errors.
GridSearchResult grid_search(ModelKind kind, const std::vector<ParamMap>& grid,
                             const SparseMatrix& x,
                             const std::vector<std::uint8_t>& y,
                             std::int64_t folds, std::uint64_t seed);

}  // namespace kalkan
