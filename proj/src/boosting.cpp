#include "kalkan/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "kalkan/errors.hpp"
#include "kalkan/parallel.hpp"

namespace kalkan {
namespace {

constexpr double kHessianFloor = 1e-16;
constexpr double kErrClampLo = 1e-10;

double feature_value(const SparseVector& row, std::uint32_t feature) {
  auto it = std::lower_bound(
      row.entries.begin(), row.entries.end(), feature,
      [](const SparseEntry& e, std::uint32_t k) { return e.index < k; });
  if (it != row.entries.end() && it->index == feature) return it->value;
  return 0.0;
}

double stable_sigmoid(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double u) {
  return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

double clamped_log_odds(const std::vector<std::uint8_t>& y) {
  double positives = 0.0;
  for (std::uint8_t label : y) positives += label;
  double rate = y.empty() ? 0.5 : positives / static_cast<double>(y.size());
  rate = std::min(std::max(rate, 1e-12), 1.0 - 1e-12);
  return std::log(rate) - std::log1p(-rate);
}

// Distinct-value bucket of the rows a node holds at one feature. `a` and `b`
// accumulate the per-row statistics (gradient and hessian); the implicit-zero
// bucket is reconstructed by subtracting the nonzero sums from the node
// totals, with the hessian clamped at zero against cancellation.
struct ValueGroup {
  double value = 0.0;
  double n = 0.0;
  double a = 0.0;
  double b = 0.0;
};

void collect_value_groups(const ColumnIndex& cols, std::uint32_t feature,
                          const std::vector<std::uint32_t>& stamp,
                          std::uint32_t mark, const std::vector<double>& ga,
                          const std::vector<double>& gb, double node_n,
                          double node_a, double node_b,
                          std::vector<ValueGroup>& out) {
  out.clear();
  double nz_n = 0.0;
  double nz_a = 0.0;
  double nz_b = 0.0;
  const auto& cells = cols.cols[feature];
  std::size_t c = 0;
  while (c < cells.size()) {
    const double v = cells[c].value;
    ValueGroup group{v, 0.0, 0.0, 0.0};
    for (; c < cells.size() && cells[c].value == v; ++c) {
      const std::uint32_t r = cells[c].row;
      if (stamp[r] != mark) continue;
      group.n += 1.0;
      group.a += ga[r];
      group.b += gb[r];
    }
    if (group.n > 0.0) {
      out.push_back(group);
      nz_n += group.n;
      nz_a += group.a;
      nz_b += group.b;
    }
  }
  const double zero_n = node_n - nz_n;
  if (zero_n > 0.5) {
    ValueGroup zero{0.0, zero_n, node_a - nz_a, std::max(0.0, node_b - nz_b)};
    auto pos = std::lower_bound(
        out.begin(), out.end(), 0.0,
        [](const ValueGroup& g, double v) { return g.value < v; });
    out.insert(pos, zero);
  }
}

double second_order_gain(double al, double bl, double ar, double br,
                         double lambda) {
  const double a = al + ar;
  const double b = bl + br;
  return al * al / (bl + lambda) + ar * ar / (br + lambda) -
         a * a / (b + lambda);
}

// Depth-limited regression tree over raw feature values. In SSE mode the
// split criterion is the variance-reduction gain of the negative gradients;
// in second-order mode it is the regularized gain on (G, H). Leaves hold the
// Newton step -G/H (SSE) or -G/(H+lambda) (second-order).
class GradTreeBuilder {
 public:
  GradTreeBuilder(const SparseMatrix& x, const ColumnIndex& cols,
                  const std::vector<double>& g, const std::vector<double>& h,
                  bool second_order, double lambda, std::int64_t max_depth)
      : x_(x),
        cols_(cols),
        g_(g),
        h_(h),
        second_order_(second_order),
        lambda_(lambda),
        max_depth_(max_depth),
        stamp_(x.n_rows(), 0) {}

  Tree build() {
    std::vector<std::uint32_t> members(x_.n_rows());
    for (std::uint32_t i = 0; i < members.size(); ++i) members[i] = i;
    double total_g = 0.0;
    double total_h = 0.0;
    for (std::uint32_t r : members) {
      total_g += g_[r];
      total_h += h_[r];
    }
    Tree tree;
    build_node(tree, members, total_g, total_h, 0);
    return tree;
  }

 private:
  struct Best {
    double gain = 0.0;
    std::uint32_t feature = 0;
    double threshold = 0.0;
    bool found = false;
  };

  std::int32_t make_leaf(Tree& tree, double node_g, double node_h,
                         double node_n) {
    const std::int32_t self = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    TreeNode& node = tree.nodes.back();
    node.feature = TreeNode::kLeafFeature;
    node.value =
        second_order_ ? -node_g / (node_h + lambda_) : -node_g / node_h;
    node.weight = node_n;
    return self;
  }

  std::int32_t build_node(Tree& tree, std::vector<std::uint32_t>& members,
                          double node_g, double node_h, std::int64_t depth) {
    const double node_n = static_cast<double>(members.size());
    if (members.size() < 2 || depth >= max_depth_) {
      return make_leaf(tree, node_g, node_h, node_n);
    }

    ++mark_;
    for (std::uint32_t r : members) stamp_[r] = mark_;

    Best best;
    std::vector<ValueGroup> groups;
    for (std::uint32_t f = 0; f < x_.n_features; ++f) {
      collect_value_groups(cols_, f, stamp_, mark_, g_, h_, node_n, node_g,
                           node_h, groups);
      if (groups.size() < 2) continue;
      double ln = 0.0;
      double la = 0.0;
      double lb = 0.0;
      for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
        ln += groups[i].n;
        la += groups[i].a;
        lb += groups[i].b;
        const double rn = node_n - ln;
        const double ra = node_g - la;
        const double rb = node_h - lb;
        double gain;
        if (second_order_) {
          gain = second_order_gain(la, lb, ra, rb, lambda_);
        } else {
          gain = la * la / ln + ra * ra / rn - node_g * node_g / node_n;
        }
        if (gain > best.gain) {
          best.gain = gain;
          best.feature = f;
          const double lo = groups[i].value;
          const double hi = groups[i + 1].value;
          best.threshold = lo + (hi - lo) * 0.5;
          best.found = true;
        }
      }
    }
    if (!best.found) return make_leaf(tree, node_g, node_h, node_n);

    std::vector<std::uint32_t> left;
    std::vector<std::uint32_t> right;
    double left_g = 0.0;
    double left_h = 0.0;
    for (std::uint32_t r : members) {
      if (feature_value(x_.row(r), best.feature) <= best.threshold) {
        left.push_back(r);
        left_g += g_[r];
        left_h += h_[r];
      } else {
        right.push_back(r);
      }
    }
    members.clear();
    members.shrink_to_fit();

    const std::int32_t self = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[self].feature = best.feature;
    tree.nodes[self].threshold = best.threshold;
    tree.nodes[self].weight = node_n;
    const std::int32_t l =
        build_node(tree, left, left_g, left_h, depth + 1);
    const std::int32_t r =
        build_node(tree, right, node_g - left_g, node_h - left_h, depth + 1);
    tree.nodes[self].left = l;
    tree.nodes[self].right = r;
    return self;
  }

  const SparseMatrix& x_;
  const ColumnIndex& cols_;
  const std::vector<double>& g_;
  const std::vector<double>& h_;
  bool second_order_;
  double lambda_;
  std::int64_t max_depth_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t mark_ = 0;
};

GradientBoostState fit_gradient(bool second_order, const SparseMatrix& x,
                                const std::vector<std::uint8_t>& y,
                                std::int64_t rounds, double eta,
                                std::int64_t max_depth, double lambda,
                                GradientBoostTrace* trace) {
  if (rounds < 0) raise(ErrorKind::Parameter, "rounds must be nonnegative");
  if (!(eta >= 0.0)) raise(ErrorKind::Parameter, "eta must be nonnegative");
  if (max_depth < 1) raise(ErrorKind::Parameter, "max_depth must be at least 1");
  if (!(lambda >= 0.0)) raise(ErrorKind::Parameter, "lambda must be nonnegative");

  GradientBoostState state;
  state.base_score = clamped_log_odds(y);
  state.eta = eta;

  const std::size_t n = x.n_rows();
  std::vector<double> f(n, state.base_score);
  std::vector<double> g(n, 0.0);
  std::vector<double> h(n, 0.0);
  const ColumnIndex cols = ColumnIndex::build(x);

  for (std::int64_t round = 0; round < rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = stable_sigmoid(f[i]);
      g[i] = p - static_cast<double>(y[i]);
      h[i] = std::max(p * (1.0 - p), kHessianFloor);
    }
    GradTreeBuilder builder(x, cols, g, h, second_order, lambda, max_depth);
    Tree tree = builder.build();
    for (std::size_t i = 0; i < n; ++i) {
      f[i] += eta * tree_value(tree, x.row(i));
    }
    state.trees.push_back(std::move(tree));
    if (trace) trace->round_loss.push_back(mean_logistic_loss(f, y));
  }
  return state;
}

}  // namespace

AdaboostState fit_adaboost(const SparseMatrix& x,
                           const std::vector<std::uint8_t>& y,
                           std::int64_t rounds, std::uint64_t /*seed*/,
                           AdaboostTrace* trace) {
  if (rounds < 1) raise(ErrorKind::Parameter, "rounds must be at least 1");

  const std::size_t n = x.n_rows();
  std::vector<double> w(n, n > 0 ? 1.0 / static_cast<double>(n) : 0.0);
  const ColumnIndex cols = ColumnIndex::build(x);

  AdaboostState state;
  std::vector<std::uint8_t> on_left(n, 0);
  for (std::int64_t round = 0; round < rounds; ++round) {
    const auto decision = best_gini_split(x, cols, w, y, 0.0);
    if (!decision) break;

    double left_pos = 0.0;
    double left_neg = 0.0;
    double right_pos = 0.0;
    double right_neg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool left =
          feature_value(x.row(i), decision->feature) <= decision->threshold;
      on_left[i] = left ? 1 : 0;
      double& bucket = y[i] ? (left ? left_pos : right_pos)
                            : (left ? left_neg : right_neg);
      bucket += w[i];
    }
    const double left_vote = left_pos > left_neg ? 1.0 : -1.0;
    const double right_vote = right_pos > right_neg ? 1.0 : -1.0;
    const double err = (left_vote > 0.0 ? left_neg : left_pos) +
                       (right_vote > 0.0 ? right_neg : right_pos);
    if (err >= 0.5) break;

    const double clamped =
        std::min(std::max(err, kErrClampLo), 1.0 - kErrClampLo);
    const double beta = 0.5 * std::log((1.0 - clamped) / clamped);
    state.stumps.push_back(AdaboostStump{decision->feature,
                                         decision->threshold, left_vote,
                                         right_vote, beta});
    if (trace) trace->stage_error.push_back(err);
    if (err <= kErrClampLo) break;

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double target = y[i] ? 1.0 : -1.0;
      const double vote = on_left[i] ? left_vote : right_vote;
      w[i] *= std::exp(-beta * target * vote);
      sum += w[i];
    }
    for (std::size_t i = 0; i < n; ++i) w[i] /= sum;
  }
  return state;
}

std::vector<double> predict_proba(const AdaboostState& m,
                                  const SparseMatrix& x) {
  std::vector<double> out(x.n_rows(), 0.0);
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    const SparseVector& row = x.row(i);
    double score = 0.0;
    for (const AdaboostStump& stump : m.stumps) {
      const bool left = feature_value(row, stump.feature) <= stump.threshold;
      score += stump.beta * (left ? stump.left_vote : stump.right_vote);
    }
    out[i] = stable_sigmoid(score);
  }
  return out;
}

std::uint32_t BinnedDataset::bin_of(std::uint32_t feature,
                                    double value) const {
  if (value == 0.0) return 0;
  const auto& c = cuts[feature];
  const auto it = std::upper_bound(c.begin(), c.end(), value);
  return 1 + static_cast<std::uint32_t>(it - c.begin());
}

BinnedDataset build_histograms(const SparseMatrix& x, std::int64_t max_bins) {
  if (max_bins < 2 || max_bins > 255) {
    raise(ErrorKind::Parameter, "max_bins must be in [2, 255]");
  }
  std::vector<std::vector<double>> values(x.n_features);
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    for (const SparseEntry& e : x.row(i).entries) {
      values[e.index].push_back(e.value);
    }
  }
  BinnedDataset out;
  out.cuts.resize(x.n_features);
  parallel_for(static_cast<std::ptrdiff_t>(x.n_features), [&](std::size_t f) {
    std::vector<double>& v = values[f];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    const std::size_t m = v.size();
    std::vector<double>& cuts = out.cuts[f];
    if (m <= 1) return;
    if (m <= static_cast<std::size_t>(max_bins)) {
      cuts.assign(v.begin() + 1, v.end());
      return;
    }
    const std::size_t b = static_cast<std::size_t>(max_bins);
    cuts.reserve(b - 1);
    for (std::size_t j = 1; j < b; ++j) {
      cuts.push_back(v[j * m / b]);
    }
  });
  return out;
}

GradientBoostState fit_gbm(const SparseMatrix& x,
                           const std::vector<std::uint8_t>& y,
                           std::int64_t rounds, double eta,
                           std::int64_t max_depth, GradientBoostTrace* trace) {
  return fit_gradient(false, x, y, rounds, eta, max_depth, 0.0, trace);
}

GradientBoostState fit_xgb(const SparseMatrix& x,
                           const std::vector<std::uint8_t>& y,
                           std::int64_t rounds, double eta,
                           std::int64_t max_depth, double lambda,
                           GradientBoostTrace* trace) {
  return fit_gradient(true, x, y, rounds, eta, max_depth, lambda, trace);
}

namespace {

struct FeatureBest {
  double gain = 0.0;
  std::uint32_t cut_bin = 0;
  bool found = false;
};

struct LiveLeaf {
  std::int32_t node = 0;
  std::vector<std::uint32_t> rows;
  double g = 0.0;
  double h = 0.0;
  double gain = 0.0;
  std::uint32_t feature = 0;
  std::uint32_t cut_bin = 0;
  bool splittable = false;
};

}  // namespace

GradientBoostState fit_leafwise(const SparseMatrix& x,
                                const std::vector<std::uint8_t>& y,
                                std::int64_t rounds, double eta,
                                std::int64_t max_leaves, std::int64_t min_child,
                                double lambda, std::int64_t max_bins,
                                GradientBoostTrace* trace,
                                LeafwiseTrace* leaf_trace) {
  if (rounds < 0) raise(ErrorKind::Parameter, "rounds must be nonnegative");
  if (!(eta >= 0.0)) raise(ErrorKind::Parameter, "eta must be nonnegative");
  if (max_leaves < 2) raise(ErrorKind::Parameter, "max_leaves must be at least 2");
  if (min_child < 1) raise(ErrorKind::Parameter, "min_child must be at least 1");
  if (!(lambda >= 0.0)) raise(ErrorKind::Parameter, "lambda must be nonnegative");

  BinnedDataset bins = build_histograms(x, max_bins);

  const std::size_t n = x.n_rows();
  SparseMatrix binned(x.n_features);
  binned.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SparseVector row;
    row.entries.reserve(x.row(i).entries.size());
    for (const SparseEntry& e : x.row(i).entries) {
      row.entries.push_back(SparseEntry{
          e.index, static_cast<double>(bins.bin_of(e.index, e.value))});
    }
    binned.add_row(std::move(row));
  }
  const ColumnIndex cols = ColumnIndex::build(binned);

  GradientBoostState state;
  state.base_score = clamped_log_odds(y);
  state.eta = eta;
  state.binned = true;
  state.cuts = std::move(bins.cuts);

  std::vector<double> f(n, state.base_score);
  std::vector<double> g(n, 0.0);
  std::vector<double> h(n, 0.0);
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t mark = 0;

  // Scans every feature of one leaf and fills its cached best split.
  const auto compute_best = [&](LiveLeaf& leaf) {
    leaf.splittable = false;
    if (static_cast<std::int64_t>(leaf.rows.size()) < min_child) return;
    ++mark;
    for (std::uint32_t r : leaf.rows) stamp[r] = mark;
    const double node_n = static_cast<double>(leaf.rows.size());

    std::vector<FeatureBest> per_feature(x.n_features);
    parallel_for(static_cast<std::ptrdiff_t>(x.n_features), [&](std::size_t fi) {
      std::vector<ValueGroup> groups;
      collect_value_groups(cols, static_cast<std::uint32_t>(fi), stamp, mark,
                           g, h, node_n, leaf.g, leaf.h, groups);
      if (groups.size() < 2) return;
      FeatureBest best;
      double la = 0.0;
      double lb = 0.0;
      for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
        la += groups[i].a;
        lb += groups[i].b;
        const double gain =
            second_order_gain(la, lb, leaf.g - la, leaf.h - lb, lambda);
        if (gain > best.gain) {
          best.gain = gain;
          best.cut_bin = static_cast<std::uint32_t>(groups[i].value);
          best.found = true;
        }
      }
      per_feature[fi] = best;
    });
    for (std::uint32_t fi = 0; fi < x.n_features; ++fi) {
      const FeatureBest& best = per_feature[fi];
      if (best.found && (!leaf.splittable || best.gain > leaf.gain)) {
        leaf.splittable = true;
        leaf.gain = best.gain;
        leaf.feature = fi;
        leaf.cut_bin = best.cut_bin;
      }
    }
  };

  for (std::int64_t round = 0; round < rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = stable_sigmoid(f[i]);
      g[i] = p - static_cast<double>(y[i]);
      h[i] = std::max(p * (1.0 - p), kHessianFloor);
    }

    Tree tree;
    tree.nodes.emplace_back();
    tree.nodes[0].weight = static_cast<double>(n);

    std::vector<LiveLeaf> leaves(1);
    leaves[0].node = 0;
    leaves[0].rows.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) leaves[0].rows[i] = i;
    for (std::size_t i = 0; i < n; ++i) {
      leaves[0].g += g[i];
      leaves[0].h += h[i];
    }
    compute_best(leaves[0]);

    while (static_cast<std::int64_t>(leaves.size()) < max_leaves) {
      std::size_t pick = leaves.size();
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (leaves[i].splittable &&
            (pick == leaves.size() || leaves[i].gain > leaves[pick].gain)) {
          pick = i;
        }
      }
      if (pick == leaves.size()) break;

      if (leaf_trace) {
        double alternative = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < leaves.size(); ++i) {
          if (i != pick && leaves[i].splittable) {
            alternative = std::max(alternative, leaves[i].gain);
          }
        }
        leaf_trace->splits.push_back(LeafwiseTrace::Split{
            round, leaves[pick].node, leaves[pick].feature,
            leaves[pick].cut_bin, leaves[pick].gain, alternative});
      }

      LiveLeaf parent = std::move(leaves[pick]);
      LiveLeaf left;
      LiveLeaf right;
      const double cut = static_cast<double>(parent.cut_bin);
      for (std::uint32_t r : parent.rows) {
        if (feature_value(binned.row(r), parent.feature) <= cut) {
          left.rows.push_back(r);
          left.g += g[r];
          left.h += h[r];
        } else {
          right.rows.push_back(r);
          right.g += g[r];
          right.h += h[r];
        }
      }
      left.node = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes[left.node].weight = static_cast<double>(left.rows.size());
      right.node = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes[right.node].weight = static_cast<double>(right.rows.size());
      tree.nodes[parent.node].feature = parent.feature;
      tree.nodes[parent.node].threshold = cut;
      tree.nodes[parent.node].left = left.node;
      tree.nodes[parent.node].right = right.node;

      compute_best(left);
      compute_best(right);
      leaves[pick] = std::move(left);
      leaves.push_back(std::move(right));
    }

    for (const LiveLeaf& leaf : leaves) {
      const double value = -leaf.g / (leaf.h + lambda);
      tree.nodes[leaf.node].value = value;
      for (std::uint32_t r : leaf.rows) f[r] += eta * value;
    }
    state.trees.push_back(std::move(tree));
    if (trace) trace->round_loss.push_back(mean_logistic_loss(f, y));
  }
  return state;
}

std::vector<double> predict_proba(const GradientBoostState& m,
                                  const SparseMatrix& x) {
  std::vector<double> out(x.n_rows(), 0.0);
  SparseVector binned_row;
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    const SparseVector* row = &x.row(i);
    if (m.binned) {
      binned_row.entries.clear();
      for (const SparseEntry& e : row->entries) {
        if (e.value == 0.0) continue;
        const auto& c = m.cuts[e.index];
        const auto it = std::upper_bound(c.begin(), c.end(), e.value);
        binned_row.entries.push_back(SparseEntry{
            e.index, static_cast<double>(1 + (it - c.begin()))});
      }
      row = &binned_row;
    }
    double score = m.base_score;
    for (const Tree& tree : m.trees) {
      score += m.eta * tree_value(tree, *row);
    }
    out[i] = stable_sigmoid(score);
  }
  return out;
}

double mean_logistic_loss(const std::vector<double>& f,
                          const std::vector<std::uint8_t>& y) {
  if (f.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double target = y[i] ? 1.0 : -1.0;
    total += softplus(-target * f[i]);
  }
  return total / static_cast<double>(f.size());
}

}  // namespace kalkan
