#pragma once

// Exhaustive reference CART over dense rows. Every feature and every
// midpoint between consecutive distinct values is scanned in ascending
// order; impurity goes through kalkan::gini_gain so gain comparisons against
// the library are bit-exact, and the strictly-greater acceptance reproduces
// the documented tie rules (lower feature, then lower threshold).

#include <algorithm>
#include <cstdint>
#include <vector>

#include "kalkan/tree.hpp"

namespace treeoracle {

struct Dataset {
  std::vector<std::vector<double>> rows;
  std::vector<std::uint8_t> y;
  std::size_t n_features() const { return rows.empty() ? 0 : rows[0].size(); }
};

struct Params {
  std::int64_t max_depth = 0;  // 0 = unlimited
  double min_split_weight = 2.0;
  double min_leaf_weight = 1.0;
};

struct Node {
  std::uint32_t feature = 0xffffffffu;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct RefTree {
  std::vector<Node> nodes;
};

inline double predict(const RefTree& t, const std::vector<double>& q) {
  int at = 0;
  while (t.nodes[at].feature != 0xffffffffu) {
    const auto& n = t.nodes[at];
    at = q[n.feature] <= n.threshold ? n.left : n.right;
  }
  return t.nodes[at].value;
}

struct Best {
  bool found = false;
  std::uint32_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

inline Best best_split(const Dataset& d, const std::vector<std::size_t>& idx,
                       const std::vector<double>& w, double min_leaf_weight) {
  double total_w = 0.0, total_pos = 0.0;
  for (auto i : idx) {
    total_w += w[i];
    total_pos += w[i] * d.y[i];
  }
  Best best;
  for (std::uint32_t f = 0; f < d.n_features(); ++f) {
    std::vector<std::pair<double, std::size_t>> vals;
    vals.reserve(idx.size());
    for (auto i : idx) vals.push_back({d.rows[i][f], i});
    std::sort(vals.begin(), vals.end());
    double left_w = 0.0, left_pos = 0.0;
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
      left_w += w[vals[k].second];
      left_pos += w[vals[k].second] * d.y[vals[k].second];
      if (vals[k].first == vals[k + 1].first) continue;
      if (left_w < min_leaf_weight || total_w - left_w < min_leaf_weight) continue;
      const double gain = kalkan::gini_gain(total_w, total_pos, left_w, left_pos);
      if (gain > best.gain) {
        best.found = true;
        best.feature = f;
        best.threshold = (vals[k].first + vals[k + 1].first) / 2.0;
        best.gain = gain;
      }
    }
  }
  if (best.gain <= 0.0) best.found = false;
  return best;
}

inline int build_node(const Dataset& d, const Params& p,
                      const std::vector<double>& w,
                      const std::vector<std::size_t>& idx, std::int64_t depth,
                      RefTree* out) {
  double total_w = 0.0, total_pos = 0.0;
  for (auto i : idx) {
    total_w += w[i];
    total_pos += w[i] * d.y[i];
  }
  const int self = static_cast<int>(out->nodes.size());
  out->nodes.push_back({});
  out->nodes[self].value = total_pos / total_w;

  const bool depth_capped = p.max_depth > 0 && depth >= p.max_depth;
  if (depth_capped || total_w < p.min_split_weight) return self;
  const Best best = best_split(d, idx, w, p.min_leaf_weight);
  if (!best.found) return self;

  std::vector<std::size_t> left, right;
  for (auto i : idx)
    (d.rows[i][best.feature] <= best.threshold ? left : right).push_back(i);
  out->nodes[self].feature = best.feature;
  out->nodes[self].threshold = best.threshold;
  out->nodes[self].left = build_node(d, p, w, left, depth + 1, out);
  out->nodes[self].right = build_node(d, p, w, right, depth + 1, out);
  return self;
}

inline RefTree build(const Dataset& d, const Params& p = {}) {
  RefTree t;
  std::vector<double> w(d.rows.size(), 1.0);
  std::vector<std::size_t> idx(d.rows.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  build_node(d, p, w, idx, 0, &t);
  return t;
}

}  // namespace treeoracle
