#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "helpers.hpp"
#include "kalkan/errors.hpp"
#include "kalkan/model.hpp"
#include "kalkan/neighbors.hpp"
#include "kalkan/sparse.hpp"

using testutil::labels;
using testutil::matrix;
using testutil::row;

namespace {

kalkan::SparseMatrix member_x() {
  return matrix({{1.0, 0.0, 0.2}, {0.8, 0.1, 0.0}, {0.9, 0.0, 0.1},
                 {0.7, 0.2, 0.2}, {0.0, 1.0, 0.1}, {0.1, 0.8, 0.0},
                 {0.0, 0.9, 0.2}, {0.2, 0.7, 0.0}});
}
std::vector<std::uint8_t> member_y() { return labels({1, 1, 1, 1, 0, 0, 0, 0}); }

}  // namespace

TEST_CASE("distance arithmetic on hand vectors") {
  using kalkan::KnnDistance;
  const auto a = row({{0, 3.0}});
  const auto b = row({{1, 4.0}});
  CHECK(kalkan::knn_distance(KnnDistance::euclidean, a, b) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(kalkan::knn_distance(KnnDistance::euclidean, a, a) == 0.0);

  // Orthogonal vectors sit at the cosine maximum for nonnegative data.
  CHECK(kalkan::knn_distance(KnnDistance::cosine, a, b) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(kalkan::knn_distance(KnnDistance::cosine, a, a) == doctest::Approx(0.0).epsilon(1e-12));
  const auto diag = row({{0, 1.0}, {1, 1.0}});
  const auto unit = row({{0, 1.0}});
  CHECK(kalkan::knn_distance(KnnDistance::cosine, unit, diag) ==
        doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-12));

  // All-zero vectors are maximally far under cosine, even from themselves.
  const kalkan::SparseVector zero;
  CHECK(kalkan::knn_distance(KnnDistance::cosine, zero, a) == 1.0);
  CHECK(kalkan::knn_distance(KnnDistance::cosine, zero, zero) == 1.0);
  CHECK(kalkan::knn_distance(KnnDistance::euclidean, zero, a) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("distance names parse and print") {
  CHECK(kalkan::parse_knn_distance("cosine") == kalkan::KnnDistance::cosine);
  CHECK(kalkan::parse_knn_distance("euclidean") == kalkan::KnnDistance::euclidean);
  CHECK(kalkan::to_string(kalkan::KnnDistance::cosine) == "cosine");
  CHECK(kalkan::to_string(kalkan::KnnDistance::euclidean) == "euclidean");
  CHECK_THROWS_WITH_AS(kalkan::parse_knn_distance("manhattan"),
                       "parameter error: unknown distance: manhattan", kalkan::Error);
}

TEST_CASE("knn validates k against the training set") {
  const auto x = matrix({{0.0}, {1.0}});
  const auto y = labels({0, 1});
  CHECK_THROWS_WITH_AS(kalkan::fit_knn(x, y, 0, kalkan::KnnDistance::euclidean),
                       "parameter error: k must be at least 1", kalkan::Error);
  CHECK_THROWS_WITH_AS(kalkan::fit_knn(x, y, 3, kalkan::KnnDistance::euclidean),
                       "parameter error: k exceeds the number of training rows", kalkan::Error);
}

TEST_CASE("a tie at the k-th distance keeps the lower training index") {
  // Rows at 0 and 2 are both one unit from the query at 1.
  const auto x = matrix({{0.0}, {2.0}});
  const auto query = matrix({{1.0}});
  const auto first_wins =
      kalkan::fit_knn(x, labels({1, 0}), 1, kalkan::KnnDistance::euclidean);
  CHECK(kalkan::predict_proba(first_wins, query)[0] == 1.0);
  const auto swapped =
      kalkan::fit_knn(x, labels({0, 1}), 1, kalkan::KnnDistance::euclidean);
  CHECK(kalkan::predict_proba(swapped, query)[0] == 0.0);
}

TEST_CASE("k equal to the corpus size reports the base rate everywhere") {
  const auto x = matrix({{0.0}, {1.0}, {5.0}, {9.0}, {12.0}, {40.0}});
  const auto y = labels({1, 0, 0, 0, 1, 0});
  const auto m = kalkan::fit_knn(x, y, 6, kalkan::KnnDistance::euclidean);
  const auto queries = matrix({{-3.0}, {7.0}, {100.0}});
  for (double p : kalkan::predict_proba(m, queries))
    CHECK(p == doctest::Approx(2.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("cosine neighbors ignore magnitude") {
  const auto x = matrix({{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.1}, {0.1, 1.0}});
  const auto y = labels({1, 0, 1, 0});
  const auto m = kalkan::fit_knn(x, y, 3, kalkan::KnnDistance::cosine);
  const auto queries = matrix({{250.0, 10.0}, {4.0, 90.0}});
  const auto p = kalkan::predict_proba(m, queries);
  CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("voting averages its members in kind order") {
  const auto x = member_x();
  const auto y = member_y();
  const auto mnb = std::make_shared<const kalkan::TrainedModel>(
      kalkan::fit_model(kalkan::default_spec(kalkan::ModelKind::multinomial_nb), x, y, 1u));
  const auto bnb = std::make_shared<const kalkan::TrainedModel>(
      kalkan::fit_model(kalkan::default_spec(kalkan::ModelKind::bernoulli_nb), x, y, 2u));
  const auto lr = std::make_shared<const kalkan::TrainedModel>(
      kalkan::fit_model(kalkan::default_spec(kalkan::ModelKind::logistic_regression), x, y, 3u));

  const auto vote = kalkan::fit_voting_from_members({mnb, bnb, lr}, 9u, y.size());
  CHECK(vote.spec.kind == kalkan::ModelKind::voting);
  CHECK(vote.seed == 9u);
  CHECK(vote.n_train == y.size());

  const auto pm = kalkan::predict_proba(*mnb, x);
  const auto pb = kalkan::predict_proba(*bnb, x);
  const auto pl = kalkan::predict_proba(*lr, x);
  const auto pv = kalkan::predict_proba(vote, x);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double mean = (pm[i] + pb[i] + pl[i]) / 3.0;
    CHECK(pv[i] == mean);  // identical accumulation order makes this exact
  }

  // Any member permutation assembles into the same model.
  const auto shuffled = kalkan::fit_voting_from_members({lr, mnb, bnb}, 9u, y.size());
  const auto ps = kalkan::predict_proba(shuffled, x);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(ps[i] == pv[i]);
}

TEST_CASE("voting rejects degenerate member sets") {
  const auto x = member_x();
  const auto y = member_y();
  CHECK_THROWS_WITH_AS(kalkan::fit_voting_from_members({}, 1u, 8),
                       "parameter error: voting requires at least one member", kalkan::Error);
  CHECK_THROWS_WITH_AS(kalkan::fit_voting_from_members({nullptr}, 1u, 8),
                       "parameter error: voting member is null", kalkan::Error);

  const auto mnb = std::make_shared<const kalkan::TrainedModel>(
      kalkan::fit_model(kalkan::default_spec(kalkan::ModelKind::multinomial_nb), x, y, 1u));
  const auto vote = std::make_shared<const kalkan::TrainedModel>(
      kalkan::fit_voting_from_members({mnb}, 1u, y.size()));
  CHECK_THROWS_WITH_AS(kalkan::fit_voting_from_members({vote}, 1u, 8),
                       "parameter error: voting members must be base models", kalkan::Error);

  auto tagged_a = *mnb;
  tagged_a.fingerprint = "aaaa";
  auto tagged_b = *mnb;
  tagged_b.fingerprint = "bbbb";
  CHECK_THROWS_WITH_AS(
      kalkan::fit_voting_from_members(
          {std::make_shared<const kalkan::TrainedModel>(tagged_a),
           std::make_shared<const kalkan::TrainedModel>(tagged_b)},
          1u, 8),
      "compatibility error: voting members were fitted on different vocabularies",
      kalkan::Error);

  // A lone tagged member stamps the ensemble with its fingerprint.
  const auto single = kalkan::fit_voting_from_members(
      {std::make_shared<const kalkan::TrainedModel>(tagged_a), mnb}, 1u, 8);
  CHECK(single.fingerprint == "aaaa");
}
