#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "kalkan/errors.hpp"
#include "kalkan/featurizer.hpp"
#include "kalkan/sparse.hpp"

using Docs = std::vector<std::vector<std::string>>;

TEST_CASE("three-document fixture: shared idf and unit rows") {
  const Docs docs = {{"a", "b"}, {"a", "c"}, {"b", "c"}};
  const auto vocab = kalkan::build_vocabulary(docs, {2});
  REQUIRE(vocab.size() == 3);
  // First-occurrence order over retained terms.
  CHECK(vocab.terms == std::vector<std::string>{"a", "b", "c"});
  CHECK(vocab.df == std::vector<std::uint32_t>{2, 2, 2});
  CHECK(vocab.n_documents == 3);

  const auto idf = kalkan::fit_idf(vocab);
  const double expected = std::log(4.0 / 3.0) + 1.0;
  REQUIRE(idf.idf.size() == 3);
  for (double v : idf.idf) CHECK(v == doctest::Approx(expected).epsilon(1e-12));

  const auto x = kalkan::vectorize_corpus(vocab, idf, docs);
  REQUIRE(x.n_rows() == 3);
  CHECK(x.n_features == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(x.row(i).l2_norm() - 1.0) <= 1e-9);
    CHECK(x.row(i).entries.size() == 2);
  }
  // Equal counts and equal idf force equal weights inside a row.
  CHECK(x.row(0).entries[0].value ==
        doctest::Approx(x.row(0).entries[1].value).epsilon(1e-12));
}

TEST_CASE("vocabulary drops rare terms and keeps first-seen order") {
  const Docs docs = {{"z", "q", "a"}, {"a", "z"}, {"z", "m"}};
  const auto vocab = kalkan::build_vocabulary(docs, {2});
  // q and m appear once; z before a by first occurrence.
  CHECK(vocab.terms == std::vector<std::string>{"z", "a"});
  CHECK(vocab.df == std::vector<std::uint32_t>{3, 2});
  CHECK(vocab.index.at("z") == 0);
  CHECK(vocab.index.at("a") == 1);
  CHECK(vocab.index.count("q") == 0);

  // df counts documents, not occurrences.
  const Docs repeated = {{"a", "a", "a"}, {"a"}};
  const auto v2 = kalkan::build_vocabulary(repeated, {2});
  REQUIRE(v2.size() == 1);
  CHECK(v2.df[0] == 2);
}

TEST_CASE("min_df boundaries") {
  const Docs docs = {{"a"}, {"b"}};
  const auto keep_all = kalkan::build_vocabulary(docs, {1});
  CHECK(keep_all.size() == 2);
  const auto keep_none = kalkan::build_vocabulary(docs, {3});
  CHECK(keep_none.size() == 0);
  CHECK_THROWS_AS(kalkan::build_vocabulary(docs, {0}), kalkan::Error);
}

TEST_CASE("count_vector sums duplicates and drops unknown terms") {
  const Docs docs = {{"a", "b"}, {"a", "b"}};
  const auto vocab = kalkan::build_vocabulary(docs, {2});
  const auto counts =
      kalkan::count_vector(vocab, {"b", "a", "b", "oov", "b"});
  REQUIRE(counts.entries.size() == 2);
  CHECK(counts.entries[0].index == 0);
  CHECK(counts.entries[0].value == 1.0);
  CHECK(counts.entries[1].index == 1);
  CHECK(counts.entries[1].value == 3.0);

  CHECK(kalkan::count_vector(vocab, {"oov", "novel"}).entries.empty());
  CHECK(kalkan::count_vector(vocab, {}).entries.empty());
}

TEST_CASE("apply_tfidf scales by idf then unit-normalizes") {
  const Docs docs = {{"a"}, {"a", "b"}, {"b"}, {"b"}};
  const auto vocab = kalkan::build_vocabulary(docs, {2});
  const auto idf = kalkan::fit_idf(vocab);
  // a: df 2, b: df 3 over 4 docs.
  const double idf_a = std::log(5.0 / 3.0) + 1.0;
  const double idf_b = std::log(5.0 / 4.0) + 1.0;
  CHECK(idf.idf[vocab.index.at("a")] == doctest::Approx(idf_a).epsilon(1e-12));
  CHECK(idf.idf[vocab.index.at("b")] == doctest::Approx(idf_b).epsilon(1e-12));

  auto row = kalkan::count_vector(vocab, {"a", "b", "b"});
  kalkan::apply_tfidf(row, idf);
  const double wa = 1.0 * idf_a;
  const double wb = 2.0 * idf_b;
  const double norm = std::sqrt(wa * wa + wb * wb);
  CHECK(row.entries[0].value == doctest::Approx(wa / norm).epsilon(1e-12));
  CHECK(row.entries[1].value == doctest::Approx(wb / norm).epsilon(1e-12));
  CHECK(std::abs(row.l2_norm() - 1.0) <= 1e-9);

  kalkan::SparseVector zero;
  kalkan::apply_tfidf(zero, idf);
  CHECK(zero.entries.empty());
  CHECK(zero.l2_norm() == 0.0);
}

TEST_CASE("vectorize_corpus keeps empty documents as zero rows") {
  const Docs fit = {{"a", "b"}, {"a", "b"}};
  const auto vocab = kalkan::build_vocabulary(fit, {2});
  const auto idf = kalkan::fit_idf(vocab);
  const Docs apply = {{"a"}, {"oov"}, {}};
  const auto x = kalkan::vectorize_corpus(vocab, idf, apply);
  REQUIRE(x.n_rows() == 3);
  CHECK(x.row(0).entries.size() == 1);
  CHECK(x.row(1).entries.empty());
  CHECK(x.row(2).entries.empty());
}

TEST_CASE("parallel vectorize_corpus equals the serial reference") {
  Docs docs;
  const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f"};
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> doc;
    for (int j = 0; j <= i % 5; ++j) doc.push_back(pool[(i + j * j) % pool.size()]);
    docs.push_back(std::move(doc));
  }
  const auto vocab = kalkan::build_vocabulary(docs, {2});
  const auto idf = kalkan::fit_idf(vocab);
  const auto par = kalkan::vectorize_corpus(vocab, idf, docs);
  const auto ser = kalkan::reference::vectorize_corpus(vocab, idf, docs);
  REQUIRE(par.n_rows() == ser.n_rows());
  CHECK(par.n_features == ser.n_features);
  for (std::size_t i = 0; i < par.n_rows(); ++i) {
    const auto& a = par.row(i).entries;
    const auto& b = ser.row(i).entries;
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].index == b[k].index);
      CHECK(a[k].value == b[k].value);  // bit-identical by construction
    }
  }
}
