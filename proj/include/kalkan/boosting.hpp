#pragma once

#include <cstdint>
#include <vector>

#include "kalkan/sparse.hpp"
#include "kalkan/tree.hpp"

namespace kalkan {

// Depth-1 weighted-Gini stump with votes in {-1,+1} per side.
struct AdaboostStump {
  std::uint32_t feature = 0;
  double threshold = 0.0;
  double left_vote = -1.0;
  double right_vote = 1.0;
  double beta = 0.0;
};

struct AdaboostState {
  std::vector<AdaboostStump> stumps;
};

struct AdaboostTrace {
  std::vector<double> stage_error;  // weighted error of each accepted stump
};

// Reweighting boosting: stage weight beta = ln((1-err)/err)/2 with err
// clamped to [1e-10, 1-1e-10]; stops before accepting a stump whose weighted
// error reaches 0.5, and after accepting a perfect one. The seed is unused
// (stump selection is deterministic) but kept for the uniform fit signature.
AdaboostState fit_adaboost(const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                           std::int64_t rounds, std::uint64_t seed,
                           AdaboostTrace* trace = nullptr);

// sigmoid(sum of beta-weighted stump votes).
std::vector<double> predict_proba(const AdaboostState& m, const SparseMatrix& x);

// Histogram binning for the leaf-wise learner. Bin 0 is reserved for zeros;
// nonzero values fall into 1 + (number of cuts <= value). Cuts sit at
// quantiles of the distinct nonzero values; when there are at most max_bins
// distinct values every one gets its own bin.
struct BinnedDataset {
  std::vector<std::vector<double>> cuts;  // per feature, ascending
  std::uint32_t bin_of(std::uint32_t feature, double value) const;
  std::size_t n_bins(std::uint32_t feature) const {
    return cuts[feature].size() + 2;
  }
};

BinnedDataset build_histograms(const SparseMatrix& x, std::int64_t max_bins);

// Additive model F(x) = base_score + eta * sum of tree values. When binned
// is set the tree thresholds are bin indices over `cuts` (bin <= threshold
// goes left); otherwise they are raw feature values.
struct GradientBoostState {
  double base_score = 0.0;
  double eta = 0.0;
  std::vector<Tree> trees;
  bool binned = false;
  std::vector<std::vector<double>> cuts;
};

struct GradientBoostTrace {
  std::vector<double> round_loss;  // training logistic loss after each round
};

// One split record per leaf-wise split: the chosen leaf's gain must beat the
// best gain available at any other live leaf at that moment.
struct LeafwiseTrace {
  struct Split {
    std::int64_t round;
    std::int32_t node;
    std::uint32_t feature;
    std::uint32_t cut_bin;
    double gain;
    double best_alternative;
  };
  std::vector<Split> splits;
};

// Logistic-loss boosting with g = p - y and h = p(1-p) floored at 1e-16.
// gbm grows SSE-reduction regression trees on -g with Newton leaf -G/H;
// xgb_style scans exact values with the second-order gain and leaf -G/(H+l).
GradientBoostState fit_gbm(const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                           std::int64_t rounds, double eta, std::int64_t max_depth,
                           GradientBoostTrace* trace = nullptr);

GradientBoostState fit_xgb(const SparseMatrix& x, const std::vector<std::uint8_t>& y,
                           std::int64_t rounds, double eta, std::int64_t max_depth,
                           double lambda, GradientBoostTrace* trace = nullptr);

// Leaf-wise growth on histograms: repeatedly split the live leaf with the
// globally largest positive gain until max_leaves; a leaf is splittable only
// with at least min_child samples.
GradientBoostState fit_leafwise(const SparseMatrix& x,
                                const std::vector<std::uint8_t>& y,
                                std::int64_t rounds, double eta,
                                std::int64_t max_leaves, std::int64_t min_child,
                                double lambda, std::int64_t max_bins,
                                GradientBoostTrace* trace = nullptr,
                                LeafwiseTrace* leaf_trace = nullptr);

std::vector<double> predict_proba(const GradientBoostState& m, const SparseMatrix& x);

// Training logistic loss at labels y for raw scores f; shared by tests.
double mean_logistic_loss(const std::vector<double>& f,
                          const std::vector<std::uint8_t>& y);

}  // namespace kalkan
