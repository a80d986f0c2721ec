#include "kalkan/tree.hpp"

#include <algorithm>
#include <cmath>

#include "kalkan/errors.hpp"
#include "kalkan/parallel.hpp"
#include "kalkan/random.hpp"

namespace kalkan {

namespace {

double value_at(const SparseVector& row, std::uint32_t feature) {
  const auto it = std::lower_bound(
      row.entries.begin(), row.entries.end(), feature,
      [](const SparseEntry& e, std::uint32_t f) { return e.index < f; });
  if (it != row.entries.end() && it->index == feature) return it->value;
  return 0.0;
}

struct Group {
  double value;
  double w;
  double pos;
};

}  // namespace

double tree_value(const Tree& tree, const SparseVector& row) {
  std::int32_t node = 0;
  while (tree.nodes[node].feature != TreeNode::kLeafFeature) {
    const TreeNode& t = tree.nodes[node];
    node = value_at(row, t.feature) <= t.threshold ? t.left : t.right;
  }
  return tree.nodes[node].value;
}

ColumnIndex ColumnIndex::build(const SparseMatrix& x) {
  ColumnIndex idx;
  idx.cols.resize(x.n_features);
  for (std::size_t r = 0; r < x.n_rows(); ++r)
    for (const auto& e : x.row(r))
      idx.cols[e.index].push_back({static_cast<std::uint32_t>(r), e.value});
  for (auto& col : idx.cols)
    std::sort(col.begin(), col.end(), [](const Cell& a, const Cell& b) {
      if (a.value != b.value) return a.value < b.value;
      return a.row < b.row;
    });
  return idx;
}

double gini_gain(double parent_w, double parent_pos, double left_w, double left_pos) {
  const double right_w = parent_w - left_w;
  const double right_pos = parent_pos - left_pos;
  auto gini = [](double w, double pos) {
    const double p = pos / w;
    const double q = (w - pos) / w;
    return 1.0 - p * p - q * q;
  };
  return gini(parent_w, parent_pos) -
         (left_w * gini(left_w, left_pos) + right_w * gini(right_w, right_pos)) /
             parent_w;
}

namespace {

// Gathers the distinct-value groups of one feature restricted to the stamped
// node members, implicit-zero bucket included at its sorted position.
void collect_groups(const ColumnIndex& cols, std::uint32_t feature,
                    const std::vector<double>& weights,
                    const std::vector<std::uint8_t>& y,
                    const std::vector<std::uint32_t>& stamp, std::uint32_t node_id,
                    double total_w, double total_pos, std::vector<Group>* out) {
  out->clear();
  double nonzero_w = 0.0, nonzero_pos = 0.0;
  for (const auto& cell : cols.cols[feature]) {
    if (stamp[cell.row] != node_id) continue;
    const double w = weights[cell.row];
    const double pos = y[cell.row] ? w : 0.0;
    nonzero_w += w;
    nonzero_pos += pos;
    if (!out->empty() && out->back().value == cell.value) {
      out->back().w += w;
      out->back().pos += pos;
    } else {
      out->push_back({cell.value, w, pos});
    }
  }
  const double zero_w = total_w - nonzero_w;
  if (zero_w > 0.0) {
    const Group zero{0.0, zero_w, total_pos - nonzero_pos};
    const auto it = std::lower_bound(
        out->begin(), out->end(), 0.0,
        [](const Group& g, double v) { return g.value < v; });
    out->insert(it, zero);
  }
}

struct BestSplit {
  bool found = false;
  SplitDecision decision;
  double left_w = 0.0;
};

// Midpoint scan for one feature; updates best on strictly larger gain, so
// scanning features in ascending order realizes the (lower feature, lower
// threshold) tie rule.
void scan_midpoints(std::uint32_t feature, const std::vector<Group>& groups,
                    double total_w, double total_pos, double min_leaf_weight,
                    BestSplit* best) {
  double left_w = 0.0, left_pos = 0.0;
  for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
    left_w += groups[g].w;
    left_pos += groups[g].pos;
    if (left_w < min_leaf_weight || total_w - left_w < min_leaf_weight) continue;
    const double gain = gini_gain(total_w, total_pos, left_w, left_pos);
    if (gain > 0.0 && (!best->found || gain > best->decision.gain)) {
      best->found = true;
      best->decision = {feature, (groups[g].value + groups[g + 1].value) / 2.0,
                        gain};
      best->left_w = left_w;
    }
  }
}

class TreeBuilder {
 public:
  TreeBuilder(const SparseMatrix& x, const ColumnIndex& cols,
              const std::vector<double>& weights, const std::vector<std::uint8_t>& y,
              ForestKind kind, const TreeParams& params, SplitMix64* rng)
      : x_(x), cols_(cols), weights_(weights), y_(y), kind_(kind), params_(params),
        rng_(rng), stamp_(x.n_rows(), 0) {}

  Tree build(std::vector<std::uint32_t> members) {
    tree_.nodes.clear();
    build_node(std::move(members), 0);
    return std::move(tree_);
  }

 private:
  std::int32_t build_node(std::vector<std::uint32_t> members, std::int64_t depth) {
    double total_w = 0.0, total_pos = 0.0;
    for (std::uint32_t r : members) {
      total_w += weights_[r];
      if (y_[r]) total_pos += weights_[r];
    }

    const bool pure = total_pos <= 0.0 || total_pos >= total_w;
    const bool depth_capped = params_.max_depth > 0 && depth >= params_.max_depth;
    const bool too_small =
        total_w < static_cast<double>(params_.min_samples_split) ||
        members.size() < 2;

    BestSplit best;
    if (!pure && !depth_capped && !too_small) find_best(members, total_w, total_pos, &best);

    if (!best.found) return make_leaf(total_w, total_pos);

    const std::int32_t self = static_cast<std::int32_t>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    tree_.nodes[self].feature = best.decision.feature;
    tree_.nodes[self].threshold = best.decision.threshold;
    tree_.nodes[self].weight = total_w;

    std::vector<std::uint32_t> left, right;
    left.reserve(members.size());
    right.reserve(members.size());
    for (std::uint32_t r : members)
      if (value_at(x_.row(r), best.decision.feature) <= best.decision.threshold)
        left.push_back(r);
      else
        right.push_back(r);
    members.clear();
    members.shrink_to_fit();

    const std::int32_t l = build_node(std::move(left), depth + 1);
    const std::int32_t r = build_node(std::move(right), depth + 1);
    tree_.nodes[self].left = l;
    tree_.nodes[self].right = r;
    return self;
  }

  std::int32_t make_leaf(double total_w, double total_pos) {
    const std::int32_t self = static_cast<std::int32_t>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    tree_.nodes[self].value = total_pos / total_w;
    tree_.nodes[self].weight = total_w;
    return self;
  }

  void find_best(const std::vector<std::uint32_t>& members, double total_w,
                 double total_pos, BestSplit* best) {
    ++stamp_counter_;
    for (std::uint32_t r : members) stamp_[r] = stamp_counter_;

    candidate_features();
    const double min_leaf = static_cast<double>(params_.min_samples_leaf);
    for (std::uint32_t f : candidates_) {
      collect_groups(cols_, f, weights_, y_, stamp_, stamp_counter_, total_w,
                     total_pos, &groups_);
      if (groups_.size() < 2) continue;
      if (kind_ == ForestKind::extra_trees) {
        const double lo = groups_.front().value;
        const double hi = groups_.back().value;
        const double thr = lo + rng_->next_double() * (hi - lo);
        double left_w = 0.0, left_pos = 0.0;
        for (const Group& g : groups_) {
          if (g.value > thr) break;
          left_w += g.w;
          left_pos += g.pos;
        }
        if (left_w < min_leaf || total_w - left_w < min_leaf) continue;
        if (left_w <= 0.0 || left_w >= total_w) continue;
        const double gain = gini_gain(total_w, total_pos, left_w, left_pos);
        if (gain > 0.0 && (!best->found || gain > best->decision.gain)) {
          best->found = true;
          best->decision = {f, thr, gain};
          best->left_w = left_w;
        }
      } else {
        scan_midpoints(f, groups_, total_w, total_pos, min_leaf, best);
      }
    }
  }

  void candidate_features() {
    const std::size_t v = x_.n_features;
    candidates_.clear();
    if (kind_ == ForestKind::cart) {
      for (std::size_t f = 0; f < v; ++f)
        candidates_.push_back(static_cast<std::uint32_t>(f));
      return;
    }
    std::size_t m = params_.max_features > 0
                        ? static_cast<std::size_t>(params_.max_features)
                        : std::max<std::size_t>(
                              1, static_cast<std::size_t>(std::sqrt(
                                     static_cast<double>(v))));
    m = std::min(m, v);
    if (pool_.size() != v) {
      pool_.resize(v);
      for (std::size_t f = 0; f < v; ++f) pool_[f] = static_cast<std::uint32_t>(f);
    }
    // Partial Fisher-Yates over the persistent pool; picked entries stay in
    // the prefix, which is fine because the pool is still a permutation.
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_->next_below(v - i));
      std::swap(pool_[i], pool_[j]);
      candidates_.push_back(pool_[i]);
    }
    std::sort(candidates_.begin(), candidates_.end());
  }

  const SparseMatrix& x_;
  const ColumnIndex& cols_;
  const std::vector<double>& weights_;
  const std::vector<std::uint8_t>& y_;
  ForestKind kind_;
  TreeParams params_;
  SplitMix64* rng_;
  Tree tree_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t stamp_counter_ = 0;
  std::vector<std::uint32_t> candidates_;
  std::vector<std::uint32_t> pool_;
  std::vector<Group> groups_;
};

}  // namespace

std::optional<SplitDecision> best_gini_split(const SparseMatrix& x,
                                             const ColumnIndex& cols,
                                             const std::vector<double>& weights,
                                             const std::vector<std::uint8_t>& y,
                                             double min_leaf_weight) {
  if (x.n_rows() != y.size() || weights.size() != y.size())
    raise(ErrorKind::Shape, "rows, weights and labels must align");
  double total_w = 0.0, total_pos = 0.0;
  for (std::size_t r = 0; r < y.size(); ++r) {
    total_w += weights[r];
    if (y[r]) total_pos += weights[r];
  }
  if (!(total_w > 0.0)) return std::nullopt;

  std::vector<std::uint32_t> stamp(x.n_rows(), 1);
  std::vector<Group> groups;
  BestSplit best;
  for (std::uint32_t f = 0; f < x.n_features; ++f) {
    collect_groups(cols, f, weights, y, stamp, 1, total_w, total_pos, &groups);
    if (groups.size() < 2) continue;
    scan_midpoints(f, groups, total_w, total_pos, min_leaf_weight, &best);
  }
  if (!best.found) return std::nullopt;
  return best.decision;
}

ForestState fit_tree_ensemble(ForestKind kind, const SparseMatrix& x,
                              const std::vector<std::uint8_t>& y,
                              const TreeParams& params, std::uint64_t seed) {
  if (x.n_rows() != y.size())
    raise(ErrorKind::Shape, "row count does not match label count");
  if (params.n_estimators < 1)
    raise(ErrorKind::Parameter, "n_estimators must be at least 1");
  if (params.max_depth < 0) raise(ErrorKind::Parameter, "max_depth must be >= 0");
  if (params.min_samples_split < 2)
    raise(ErrorKind::Parameter, "min_samples_split must be at least 2");
  if (params.min_samples_leaf < 1)
    raise(ErrorKind::Parameter, "min_samples_leaf must be at least 1");
  if (params.max_features < 0)
    raise(ErrorKind::Parameter, "max_features must be >= 0");

  const std::size_t n = x.n_rows();
  const std::size_t n_trees =
      kind == ForestKind::cart ? 1 : static_cast<std::size_t>(params.n_estimators);
  const ColumnIndex cols = ColumnIndex::build(x);

  ForestState state;
  state.trees.resize(n_trees);
  parallel_for(static_cast<std::ptrdiff_t>(n_trees), [&](std::ptrdiff_t t) {
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<double> weights(n, 1.0);
    std::vector<std::uint32_t> members;

    if (kind == ForestKind::random_forest && params.bootstrap) {
      std::vector<double> mult(n, 0.0);
      for (std::size_t d = 0; d < n; ++d)
        mult[static_cast<std::size_t>(rng.next_below(n))] += 1.0;
      weights = std::move(mult);
    }
    for (std::size_t r = 0; r < n; ++r)
      if (weights[r] > 0.0) members.push_back(static_cast<std::uint32_t>(r));

    TreeBuilder builder(x, cols, weights, y, kind, params, &rng);
    state.trees[static_cast<std::size_t>(t)] = builder.build(std::move(members));
  });
  return state;
}

std::vector<double> predict_proba(const ForestState& m, const SparseMatrix& x) {
  std::vector<double> out(x.n_rows(), 0.0);
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    double sum = 0.0;
    for (const Tree& t : m.trees) sum += tree_value(t, x.row(i));
    out[i] = sum / static_cast<double>(m.trees.size());
  }
  return out;
}

}  // namespace kalkan
