#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "helpers.hpp"
#include "kalkan/boosting.hpp"
#include "kalkan/errors.hpp"
#include "kalkan/sparse.hpp"

using testutil::labels;
using testutil::matrix;
using testutil::row;

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Feature 0 decides the label; feature 1 is shuffled noise.
kalkan::SparseMatrix signal_x() {
  return matrix({{0.0, 1.0}, {0.0, 2.0}, {0.0, 0.0}, {1.0, 2.0}, {1.0, 0.0},
                 {1.0, 1.0}});
}
std::vector<std::uint8_t> signal_y() { return labels({0, 0, 0, 1, 1, 1}); }

// Majority structure with two contradicting rows.
kalkan::SparseMatrix noisy_x() {
  return matrix({{0.0, 0.0}, {0.0, 1.0}, {0.0, 2.0}, {0.0, 1.0},
                 {2.0, 0.0}, {2.0, 1.0}, {2.0, 2.0}, {2.0, 1.0},
                 {0.0, 2.0}, {2.0, 0.0}});
}
std::vector<std::uint8_t> noisy_y() { return labels({0, 0, 0, 0, 1, 1, 1, 1, 1, 0}); }

void check_non_increasing(const std::vector<double>& seq) {
  for (std::size_t i = 1; i < seq.size(); ++i)
    CHECK(seq[i] <= seq[i - 1] + 1e-12);
}

}  // namespace

TEST_CASE("histogram cuts give each distinct value its own bin when room allows") {
  // Column values: zeros plus {1, 2, 3}.
  kalkan::SparseMatrix x(1);
  x.add_row(row({}));
  x.add_row(row({{0, 1.0}}));
  x.add_row(row({{0, 2.0}}));
  x.add_row(row({{0, 3.0}}));
  const auto b = kalkan::build_histograms(x, 255);
  REQUIRE(b.cuts.size() == 1);
  CHECK(b.cuts[0] == std::vector<double>{2.0, 3.0});
  CHECK(b.n_bins(0) == 4);
  CHECK(b.bin_of(0, 0.0) == 0);
  CHECK(b.bin_of(0, 1.0) == 1);
  CHECK(b.bin_of(0, 2.0) == 2);
  CHECK(b.bin_of(0, 3.0) == 3);
  // Off-grid values land between their neighbours.
  CHECK(b.bin_of(0, 0.5) == 1);
  CHECK(b.bin_of(0, 2.5) == 2);
  CHECK(b.bin_of(0, 9.0) == 3);
}

TEST_CASE("histogram bins are capped and monotone under quantile compression") {
  kalkan::SparseMatrix x(1);
  x.add_row(row({}));
  for (int v = 1; v <= 10; ++v)
    x.add_row(row({{0, static_cast<double>(v)}}));
  const auto b = kalkan::build_histograms(x, 4);
  // The budget caps the nonzero-value bins; bin 0 for zeros rides on top.
  CHECK(b.n_bins(0) <= 5);
  CHECK(b.cuts[0].size() + 1 <= 4);
  for (std::size_t i = 1; i < b.cuts[0].size(); ++i)
    CHECK(b.cuts[0][i] > b.cuts[0][i - 1]);
  std::uint32_t prev = 0;
  for (int v = 0; v <= 11; ++v) {
    const auto bin = b.bin_of(0, static_cast<double>(v));
    CHECK(bin >= (v == 0 ? 0u : 1u));
    CHECK(bin >= prev);
    CHECK(bin < b.n_bins(0));
    if (v > 0) prev = bin;
  }
  CHECK_THROWS_WITH_AS(kalkan::build_histograms(x, 1),
                       "parameter error: max_bins must be in [2, 255]", kalkan::Error);
  CHECK_THROWS_WITH_AS(kalkan::build_histograms(x, 256),
                       "parameter error: max_bins must be in [2, 255]", kalkan::Error);
}

TEST_CASE("adaboost stops right after a perfect stump") {
  kalkan::SparseMatrix x(1);
  x.add_row(row({}));
  x.add_row(row({}));
  x.add_row(row({{0, 1.0}}));
  x.add_row(row({{0, 1.0}}));
  const auto y = labels({0, 0, 1, 1});
  kalkan::AdaboostTrace trace;
  const auto m = kalkan::fit_adaboost(x, y, 25, 42u, &trace);
  REQUIRE(m.stumps.size() == 1);
  REQUIRE(trace.stage_error.size() == 1);
  CHECK(trace.stage_error[0] <= 1e-9);
  CHECK(m.stumps[0].feature == 0);
  CHECK(m.stumps[0].threshold == 0.5);
  const auto p = kalkan::predict_proba(m, x);
  for (std::size_t i = 0; i < y.size(); ++i) {
    CHECK((p[i] > 0.5) == (y[i] == 1));
    CHECK(std::abs(p[i] - static_cast<double>(y[i])) < 1e-4);
  }
}

TEST_CASE("adaboost declines the xor problem and falls back to even odds") {
  const auto x = matrix({{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}});
  const auto y = labels({0, 0, 1, 1});
  kalkan::AdaboostTrace trace;
  const auto m = kalkan::fit_adaboost(x, y, 10, 1u, &trace);
  CHECK(m.stumps.empty());
  CHECK(trace.stage_error.empty());
  const auto p = kalkan::predict_proba(m, x);
  for (double v : p) CHECK(v == 0.5);
}

TEST_CASE("adaboost stage errors stay below one half on noisy data") {
  kalkan::AdaboostTrace trace;
  const auto m = kalkan::fit_adaboost(noisy_x(), noisy_y(), 15, 7u, &trace);
  CHECK(!m.stumps.empty());
  CHECK(m.stumps.size() <= 15);
  REQUIRE(trace.stage_error.size() == m.stumps.size());
  for (double e : trace.stage_error) {
    CHECK(e < 0.5);
    CHECK(e >= 0.0);
  }
  for (const auto& s : m.stumps) CHECK(s.beta > 0.0);
}

TEST_CASE("gradient boosting losses never increase round over round") {
  for (const bool noisy : {false, true}) {
    const auto x = noisy ? noisy_x() : signal_x();
    const auto y = noisy ? noisy_y() : signal_y();

    kalkan::GradientBoostTrace gbm_trace;
    const auto gbm = kalkan::fit_gbm(x, y, 12, 0.3, 3, &gbm_trace);
    REQUIRE(gbm_trace.round_loss.size() == 12);
    check_non_increasing(gbm_trace.round_loss);

    kalkan::GradientBoostTrace xgb_trace;
    const auto xgb = kalkan::fit_xgb(x, y, 12, 0.3, 3, 1.0, &xgb_trace);
    REQUIRE(xgb_trace.round_loss.size() == 12);
    check_non_increasing(xgb_trace.round_loss);

    kalkan::GradientBoostTrace leaf_trace;
    const auto leaf = kalkan::fit_leafwise(x, y, 12, 0.3, 4, 1, 1.0, 32, &leaf_trace);
    REQUIRE(leaf_trace.round_loss.size() == 12);
    check_non_increasing(leaf_trace.round_loss);

    if (!noisy) {
      CHECK(gbm_trace.round_loss.back() < 0.2);
      CHECK(xgb_trace.round_loss.back() < 0.3);
      CHECK(leaf_trace.round_loss.back() < 0.3);
      for (const auto* model : {&gbm, &xgb, &leaf}) {
        const auto p = kalkan::predict_proba(*model, x);
        for (std::size_t i = 0; i < y.size(); ++i)
          CHECK((p[i] > 0.5) == (y[i] == 1));
      }
    }
  }
}

TEST_CASE("two-leaf leafwise growth equals depth-one exact boosting") {
  const auto x = signal_x();
  const auto y = signal_y();
  const auto xgb = kalkan::fit_xgb(x, y, 6, 0.4, 1, 0.7, nullptr);
  // Binning is lossless here: every feature has at most two distinct
  // nonzero values, far under the bin budget.
  const auto leaf = kalkan::fit_leafwise(x, y, 6, 0.4, 2, 1, 0.7, 255, nullptr);
  const auto px = kalkan::predict_proba(xgb, x);
  const auto pl = kalkan::predict_proba(leaf, x);
  REQUIRE(px.size() == pl.size());
  for (std::size_t i = 0; i < px.size(); ++i)
    CHECK(std::abs(px[i] - pl[i]) <= 1e-12);
}

TEST_CASE("an unsplittable root leaves predictions at the base rate") {
  const auto x = signal_x();
  const auto y = labels({0, 0, 0, 0, 1, 1});
  const auto m = kalkan::fit_leafwise(x, y, 5, 0.3, 4, /*min_child=*/100, 1.0, 32);
  const auto p = kalkan::predict_proba(m, x);
  const double base = sigmoid(m.base_score);
  for (double v : p) {
    CHECK(v == doctest::Approx(base).epsilon(1e-15));
    CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("leafwise always splits the globally best leaf") {
  kalkan::LeafwiseTrace trace;
  const auto m = kalkan::fit_leafwise(noisy_x(), noisy_y(), 8, 0.3, 5, 1, 0.5,
                                      32, nullptr, &trace);
  CHECK(!m.trees.empty());
  REQUIRE(!trace.splits.empty());
  std::int64_t prev_round = 0;
  for (const auto& s : trace.splits) {
    CHECK(s.gain > 0.0);
    CHECK(s.gain >= s.best_alternative - 1e-12);
    CHECK(s.round >= prev_round);
    prev_round = s.round;
  }
}

TEST_CASE("zero rounds predict the clamped prior everywhere") {
  const auto x = signal_x();
  const auto y = labels({0, 0, 0, 0, 1, 1});
  const auto gbm = kalkan::fit_gbm(x, y, 0, 0.3, 3);
  CHECK(gbm.trees.empty());
  const auto p = kalkan::predict_proba(gbm, x);
  for (double v : p) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("boosting parameter validation") {
  const auto x = signal_x();
  const auto y = signal_y();
  CHECK_THROWS_WITH_AS(kalkan::fit_gbm(x, y, -1, 0.3, 3),
                       "parameter error: rounds must be nonnegative", kalkan::Error);
  CHECK_THROWS_WITH_AS(kalkan::fit_gbm(x, y, 5, -0.1, 3),
                       "parameter error: eta must be nonnegative", kalkan::Error);
  CHECK_THROWS_WITH_AS(kalkan::fit_gbm(x, y, 5, 0.3, 0),
                       "parameter error: max_depth must be at least 1", kalkan::Error);
  CHECK_THROWS_WITH_AS(kalkan::fit_xgb(x, y, 5, 0.3, 3, -1.0),
                       "parameter error: lambda must be nonnegative", kalkan::Error);
  CHECK_THROWS_WITH_AS(kalkan::fit_adaboost(x, y, 0, 1u),
                       "parameter error: rounds must be at least 1", kalkan::Error);
  CHECK_THROWS_WITH_AS(kalkan::fit_leafwise(x, y, 5, 0.3, 1, 1, 1.0, 32),
                       "parameter error: max_leaves must be at least 2", kalkan::Error);
  CHECK_THROWS_WITH_AS(kalkan::fit_leafwise(x, y, 5, 0.3, 4, 0, 1.0, 32),
                       "parameter error: min_child must be at least 1", kalkan::Error);
  CHECK_THROWS_WITH_AS(kalkan::fit_leafwise(x, y, 5, 0.3, 4, 1, -1.0, 32),
                       "parameter error: lambda must be nonnegative", kalkan::Error);
}

TEST_CASE("mean logistic loss at zero scores is ln two") {
  const std::vector<double> zeros(4, 0.0);
  CHECK(kalkan::mean_logistic_loss(zeros, labels({0, 1, 0, 1})) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  const std::vector<double> f{2.0, -2.0};
  CHECK(kalkan::mean_logistic_loss(f, labels({1, 0})) ==
        doctest::Approx(std::log1p(std::exp(-2.0))).epsilon(1e-12));
}
