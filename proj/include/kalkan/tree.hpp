#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kalkan/sparse.hpp"

namespace kalkan {

// A node is a leaf when feature == kLeafFeature. Classification trees carry
// P(label 1) in value; boosted regression trees carry the unscaled leaf
// weight. Routing rule everywhere: x[feature] <= threshold goes left.
struct TreeNode {
  static constexpr std::uint32_t kLeafFeature = 0xffffffffu;
  std::uint32_t feature = kLeafFeature;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;
  double weight = 0.0;  // weighted sample count at the node
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

double tree_value(const Tree& tree, const SparseVector& row);

// Per-feature (row, value) pairs sorted by value ascending, ties by row.
// Implicit zeros are not materialized; node scans add a zero-mass bucket.
struct ColumnIndex {
  struct Cell {
    std::uint32_t row;
    double value;
  };
  std::vector<std::vector<Cell>> cols;

  static ColumnIndex build(const SparseMatrix& x);
};

struct SplitDecision {
  std::uint32_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

// Weighted Gini impurity decrease of a (w, w_pos) split of a parent node,
// relative to parent weight. Shared with the test oracle so equality is
// exact, not approximate.
double gini_gain(double parent_w, double parent_pos, double left_w, double left_pos);

// Best midpoint split over all features for the whole matrix (the adaboost
// stump search). Thresholds are midpoints between consecutive distinct
// values, implicit zeros included; ties prefer lower feature then lower
// threshold; returns nullopt when no split has positive gain. Splits that
// would leave a side below min_leaf_weight are skipped.
std::optional<SplitDecision> best_gini_split(const SparseMatrix& x,
                                             const ColumnIndex& cols,
                                             const std::vector<double>& weights,
                                             const std::vector<std::uint8_t>& y,
                                             double min_leaf_weight);

enum class ForestKind { cart, random_forest, extra_trees };

struct TreeParams {
  std::int64_t n_estimators = 100;
  std::int64_t max_depth = 0;  // 0 = unlimited
  std::int64_t min_samples_split = 2;
  std::int64_t min_samples_leaf = 1;
  std::int64_t max_features = 0;  // 0 = sqrt(V) for forest kinds, all for cart
  bool bootstrap = true;          // honored by random_forest only
};

struct ForestState {
  std::vector<Tree> trees;
};

// cart: one tree, every feature a candidate; random_forest: bootstrap
// resample (as multiplicity weights) and max_features candidates per node;
// extra_trees: no bootstrap, per-candidate uniform threshold in the node's
// [min, max). Tree t draws all randomness from mix_seed(seed, t), so trees
// can be built in parallel with bit-identical results.
ForestState fit_tree_ensemble(ForestKind kind, const SparseMatrix& x,
                              const std::vector<std::uint8_t>& y,
                              const TreeParams& params, std::uint64_t seed);

// Arithmetic mean of the member trees' leaf probabilities.
std::vector<double> predict_proba(const ForestState& m, const SparseMatrix& x);

}  // namespace kalkan
