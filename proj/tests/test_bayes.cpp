#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "helpers.hpp"
#include "kalkan/bayes.hpp"
#include "kalkan/errors.hpp"
#include "kalkan/random.hpp"
#include "kalkan/sparse.hpp"
#include "nb_oracle.hpp"

using testutil::labels;
using testutil::matrix;
using testutil::row;

namespace {

// Fixture from the two-word corpus: d0 = "kötü kötü" (label 1), d1 = "iyi"
// (label 0), vocabulary order [kötü, iyi].
kalkan::SparseMatrix two_word_corpus() {
  return matrix({{2.0, 0.0}, {0.0, 1.0}});
}

nboracle::DenseCorpus fuzz_corpus(kalkan::SplitMix64& rng) {
  nboracle::DenseCorpus c;
  const std::size_t n_docs = 2 + rng.next_below(5);   // 2..6
  const std::size_t n_terms = 1 + rng.next_below(4);  // 1..4
  c.rows.resize(n_docs, std::vector<double>(n_terms, 0.0));
  c.y.resize(n_docs);
  for (std::size_t i = 0; i < n_docs; ++i) {
    c.y[i] = static_cast<std::uint8_t>(rng.next_below(2));
    for (auto& v : c.rows[i]) v = static_cast<double>(rng.next_below(4));
  }
  c.y[0] = 0;  // both labels always present
  c.y[n_docs - 1] = 1;
  return c;
}

kalkan::SparseMatrix to_sparse(const nboracle::DenseCorpus& c) {
  return matrix(c.rows);
}

}  // namespace

TEST_CASE("two-word corpus reproduces the hand-computed posteriors") {
  const auto x = two_word_corpus();
  const auto y = labels({1, 0});

  const auto mnb = kalkan::fit_multinomial_nb(x, y, 1.0);
  // count(kötü|1) = 2, total(1) = 2, V = 2: likelihood = 3/4.
  CHECK(std::exp(mnb.log_likelihood[1][0]) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::exp(mnb.log_likelihood[1][1]) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::exp(mnb.log_likelihood[0][0]) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::exp(mnb.log_likelihood[0][1]) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(mnb.log_prior[0] == doctest::Approx(std::log(0.5)).epsilon(1e-12));

  // Query "kötü": joint1 = 0.5 * 0.75, joint0 = 0.5 / 3, P(1) = 9/13.
  const auto joint = kalkan::nb_log_joint(mnb, row({{0, 1.0}}));
  const double p1 = kalkan::posterior_from_log_joint(joint);
  CHECK(p1 == doctest::Approx(0.375 / (0.375 + 1.0 / 6.0)).epsilon(1e-12));
  CHECK(p1 == doctest::Approx(9.0 / 13.0).epsilon(1e-12));

  const auto bnb = kalkan::fit_bernoulli_nb(x, y, 1.0);
  // docs_with(kötü, 1) = 1, n_1 = 1: theta = 2/3.
  CHECK(std::exp(bnb.log_theta[1][0]) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::exp(bnb.log_theta[0][0]) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("empty document scores the log priors exactly") {
  const auto x = two_word_corpus();
  const auto y = labels({1, 0});
  const auto mnb = kalkan::fit_multinomial_nb(x, y, 1.0);
  const auto joint = kalkan::nb_log_joint(mnb, kalkan::SparseVector{});
  CHECK(joint[0] == mnb.log_prior[0]);
  CHECK(joint[1] == mnb.log_prior[1]);
  CHECK(kalkan::posterior_from_log_joint(joint) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("multinomial likelihoods sum to one per label") {
  kalkan::SplitMix64 rng(11u);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = fuzz_corpus(rng);
    const auto x = to_sparse(c);
    const auto mnb = kalkan::fit_multinomial_nb(x, c.y, 0.5);
    for (int lab = 0; lab < 2; ++lab) {
      double s = 0.0;
      for (double ll : mnb.log_likelihood[lab]) s += std::exp(ll);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("posterior normalization is exact for both orderings") {
  CHECK(kalkan::posterior_from_log_joint({0.0, 0.0}) == 0.5);
  const double p = kalkan::posterior_from_log_joint({-1000.0, -1001.0});
  const double q = kalkan::posterior_from_log_joint({-1001.0, -1000.0});
  CHECK(p + q == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kalkan::posterior_from_log_joint({-10000.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("multinomial argmax is invariant under a balanced appended feature") {
  // Appending one extra occurrence of a term with identical likelihood under
  // both labels shifts both joints equally.
  const auto x = matrix({{1.0, 2.0, 1.0}, {2.0, 1.0, 1.0},
                         {1.0, 3.0, 1.0}, {3.0, 1.0, 1.0}});
  const auto y = labels({1, 0, 1, 0});
  const auto mnb = kalkan::fit_multinomial_nb(x, y, 1.0);
  // Term 2 has equal counts under both labels and equal totals, so its
  // likelihood matches across labels.
  CHECK(mnb.log_likelihood[0][2] == doctest::Approx(mnb.log_likelihood[1][2]).epsilon(1e-12));
  const auto base = kalkan::nb_log_joint(mnb, row({{0, 1.0}, {1, 2.0}}));
  const auto shifted = kalkan::nb_log_joint(mnb, row({{0, 1.0}, {1, 2.0}, {2, 5.0}}));
  const double p_base = kalkan::posterior_from_log_joint(base);
  const double p_shift = kalkan::posterior_from_log_joint(shifted);
  CHECK((p_base > 0.5) == (p_shift > 0.5));
  CHECK(p_base == doctest::Approx(p_shift).epsilon(1e-9));
}

TEST_CASE("gaussian mirrored blobs give an even posterior at the origin") {
  const auto x = matrix({{-1.0}, {1.0}});
  const auto y = labels({0, 1});
  const auto gnb = kalkan::fit_gaussian_nb(x, y, 1);
  REQUIRE(gnb.columns == std::vector<std::uint32_t>{0});
  const auto joint = kalkan::nb_log_joint(gnb, kalkan::SparseVector{});
  CHECK(kalkan::posterior_from_log_joint(joint) == doctest::Approx(0.5).epsilon(1e-12));

  const auto x2 = matrix({{0.0}, {2.0}, {4.0}, {6.0}});
  const auto y2 = labels({0, 0, 1, 1});
  const auto g2 = kalkan::fit_gaussian_nb(x2, y2, 1);
  const auto mid = kalkan::nb_log_joint(g2, row({{0, 3.0}}));
  CHECK(kalkan::posterior_from_log_joint(mid) == doctest::Approx(0.5).epsilon(1e-12));
  const auto low = kalkan::nb_log_joint(g2, row({{0, 1.0}}));
  CHECK(kalkan::posterior_from_log_joint(low) < 0.5);
}

TEST_CASE("gaussian projection follows document frequency") {
  // Column 1 appears in three documents, column 0 in two, column 2 in one.
  const auto x = matrix({{1.0, 1.0, 0.0}, {1.0, 2.0, 0.0},
                         {0.0, 3.0, 1.0}, {0.0, 0.0, 0.0}});
  const auto y = labels({0, 0, 1, 1});
  const auto gnb = kalkan::fit_gaussian_nb(x, y, 2);
  CHECK(gnb.columns == std::vector<std::uint32_t>{0, 1});
  const auto all = kalkan::fit_gaussian_nb(x, y, 99);
  CHECK(all.columns == std::vector<std::uint32_t>{0, 1, 2});
}

TEST_CASE("fit rejects invalid parameters and data") {
  const auto x = two_word_corpus();
  const auto y = labels({1, 0});
  CHECK_THROWS_WITH_AS(kalkan::fit_multinomial_nb(x, y, 0.0),
                       "parameter error: alpha must be positive", kalkan::Error);
  CHECK_THROWS_WITH_AS(kalkan::fit_bernoulli_nb(x, y, -1.0),
                       "parameter error: alpha must be positive", kalkan::Error);
  CHECK_THROWS_WITH_AS(kalkan::fit_gaussian_nb(x, y, 0),
                       "parameter error: top_k must be at least 1", kalkan::Error);
  CHECK_THROWS_WITH_AS(kalkan::fit_multinomial_nb(x, labels({1, 0, 1}), 1.0),
                       "shape error: row count does not match label count",
                       kalkan::Error);

  auto neg = matrix({{1.0, 0.0}, {-1.0, 1.0}});
  CHECK_THROWS_WITH_AS(kalkan::fit_multinomial_nb(neg, y, 1.0),
                       "data error: multinomial model requires non-negative features",
                       kalkan::Error);

  const auto mnb = kalkan::fit_multinomial_nb(x, y, 1.0);
  CHECK_THROWS_AS(kalkan::nb_log_joint(mnb, row({{7, 1.0}})), kalkan::Error);
}

TEST_CASE("fuzzed corpora agree with the direct-formula oracle") {
  kalkan::SplitMix64 rng(20240819u);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = fuzz_corpus(rng);
    const auto x = to_sparse(c);

    const auto mnb = kalkan::fit_multinomial_nb(x, c.y, 1.0);
    const auto bnb = kalkan::fit_bernoulli_nb(x, c.y, 1.0);
    const auto gnb = kalkan::fit_gaussian_nb(x, c.y, c.n_terms());

    // Queries: every training row plus two random documents.
    std::vector<std::vector<double>> queries = c.rows;
    for (int q = 0; q < 2; ++q) {
      std::vector<double> extra(c.n_terms());
      for (auto& v : extra) v = static_cast<double>(rng.next_below(4));
      queries.push_back(std::move(extra));
    }

    for (const auto& q : queries) {
      kalkan::SparseVector sq;
      for (std::size_t t = 0; t < q.size(); ++t)
        if (q[t] != 0.0) sq.entries.push_back({static_cast<std::uint32_t>(t), q[t]});

      const auto om = nboracle::multinomial_posterior(c, q, 1.0);
      REQUIRE(om.valid);
      const double pm = kalkan::posterior_from_log_joint(kalkan::nb_log_joint(mnb, sq));
      CHECK(std::abs(pm - om.p1) <= 1e-9);

      const auto ob = nboracle::bernoulli_posterior(c, q, 1.0);
      REQUIRE(ob.valid);
      const double pb = kalkan::posterior_from_log_joint(kalkan::nb_log_joint(bnb, sq));
      CHECK(std::abs(pb - ob.p1) <= 1e-9);

      const auto og = nboracle::gaussian_posterior(c, q);
      const double pg = kalkan::posterior_from_log_joint(kalkan::nb_log_joint(gnb, sq));
      if (og.valid) {
        CHECK(std::abs(pg - og.p1) <= 1e-9);
        ++compared;
      }
    }
  }
  // The underflow guard must not hollow out the gaussian comparison.
  CHECK(compared > 150);
}

TEST_CASE("predict_proba matches per-row log joints") {
  kalkan::SplitMix64 rng(5u);
  const auto c = fuzz_corpus(rng);
  const auto x = to_sparse(c);
  const auto mnb = kalkan::fit_multinomial_nb(x, c.y, 1.0);
  const auto bnb = kalkan::fit_bernoulli_nb(x, c.y, 1.0);
  const auto gnb = kalkan::fit_gaussian_nb(x, c.y, c.n_terms());
  const auto pm = kalkan::predict_proba(mnb, x);
  const auto pb = kalkan::predict_proba(bnb, x);
  const auto pg = kalkan::predict_proba(gnb, x);
  REQUIRE(pm.size() == x.n_rows());
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    CHECK(pm[i] == kalkan::posterior_from_log_joint(kalkan::nb_log_joint(mnb, x.row(i))));
    CHECK(pb[i] == kalkan::posterior_from_log_joint(kalkan::nb_log_joint(bnb, x.row(i))));
    CHECK(pg[i] == doctest::Approx(kalkan::posterior_from_log_joint(
                       kalkan::nb_log_joint(gnb, x.row(i)))).epsilon(1e-12));
  }
}
