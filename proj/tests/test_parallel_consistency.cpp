// Parallel kernels must be bit-identical to their serial twins at any
// thread count: every loop index owns its output slot outright.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdint>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "kalkan/boosting.hpp"
#include "kalkan/dense.hpp"
#include "kalkan/featurizer.hpp"
#include "kalkan/model.hpp"
#include "kalkan/normalizer.hpp"
#include "kalkan/random.hpp"
#include "kalkan/sparse.hpp"

namespace {

struct ThreadCount {
  explicit ThreadCount(int n) {
#ifdef _OPENMP
    previous = omp_get_max_threads();
    omp_set_num_threads(n);
#else
    (void)n;
#endif
  }
  ~ThreadCount() {
#ifdef _OPENMP
    omp_set_num_threads(previous);
#endif
  }
  int previous = 1;
};

const std::vector<int>& thread_counts() {
#ifdef _OPENMP
  static const std::vector<int> counts{1, 2, 4};
#else
  static const std::vector<int> counts{1};
#endif
  return counts;
}

std::vector<std::string> noisy_texts() {
  std::vector<std::string> texts;
  kalkan::SplitMix64 rng(404);
  const std::vector<std::string> stems{
      "salak herif yine yazmis",  "RT @ali sen qerizekali misin",
      "bugun hava cok guzel",     "SALAAAAK adam http://t.co/abc",
      "yemek tarifi harikaaa!!!", "beyinsizz yorumlar okudum",
      "maci izledik 90 dakika",   "gerzekalı biri daha geldi"};
  for (int i = 0; i < 160; ++i) {
    std::string text = stems[rng.next_below(stems.size())];
    if (rng.next_below(3) == 0) text += " @mention";
    if (rng.next_below(3) == 0) text += " www.link.tr";
    texts.push_back(std::move(text));
  }
  return texts;
}

kalkan::SparseMatrix boost_matrix() {
  std::vector<std::vector<double>> rows;
  kalkan::SplitMix64 rng(99);
  for (int r = 0; r < 60; ++r) {
    std::vector<double> row(8, 0.0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (rng.next_below(3) != 0) row[c] = rng.next_double() * 4.0;
    }
    rows.push_back(std::move(row));
  }
  return testutil::matrix(rows);
}

std::vector<std::uint8_t> boost_labels(const kalkan::SparseMatrix& x) {
  std::vector<std::uint8_t> y;
  for (std::size_t r = 0; r < x.n_rows(); ++r) {
    double sum = 0.0;
    for (const auto& e : x.row(r)) sum += e.value;
    y.push_back(sum > 8.0 ? 1 : 0);
  }
  return y;
}

}  // namespace

TEST_CASE("corpus normalization is thread-count independent") {
  const auto cfg = kalkan::load_normalizer_config(
      testutil::source_root() + "/assets/stopwords_tr.txt",
      testutil::source_root() + "/assets/slang_tr.tsv");
  const auto texts = noisy_texts();
  const auto expected = kalkan::reference::normalize_corpus(texts, cfg);

  for (int n : thread_counts()) {
    CAPTURE(n);
    ThreadCount guard(n);
    CHECK(kalkan::normalize_corpus(texts, cfg) == expected);
  }
}

TEST_CASE("vectorization is thread-count independent") {
  const auto cfg = kalkan::load_normalizer_config(
      testutil::source_root() + "/assets/stopwords_tr.txt",
      testutil::source_root() + "/assets/slang_tr.tsv");
  const auto docs = kalkan::reference::normalize_corpus(noisy_texts(), cfg);
  kalkan::VocabularyConfig vcfg;
  vcfg.min_df = 2;
  const auto vocab = kalkan::build_vocabulary(docs, vcfg);
  const auto idf = kalkan::fit_idf(vocab);
  const auto expected = kalkan::reference::vectorize_corpus(vocab, idf, docs);

  for (int n : thread_counts()) {
    CAPTURE(n);
    ThreadCount guard(n);
    const auto got = kalkan::vectorize_corpus(vocab, idf, docs);
    REQUIRE(got.n_rows() == expected.n_rows());
    CHECK(got.n_features == expected.n_features);
    for (std::size_t r = 0; r < got.n_rows(); ++r) {
      const auto& a = got.row(r).entries;
      const auto& b = expected.row(r).entries;
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].index == b[i].index);
        CHECK(a[i].value == b[i].value);
      }
    }
  }
}

TEST_CASE("scatter accumulation is thread-count independent") {
  kalkan::SplitMix64 rng(7);
  std::vector<std::vector<double>> raw;
  for (int r = 0; r < 90; ++r) {
    std::vector<double> row;
    for (int c = 0; c < 70; ++c) row.push_back(rng.next_double() - 0.5);
    raw.push_back(std::move(row));
  }
  kalkan::DenseMatrix x(raw.size(), raw[0].size());
  for (std::size_t r = 0; r < raw.size(); ++r) {
    for (std::size_t c = 0; c < raw[r].size(); ++c) x.at(r, c) = raw[r][c];
  }
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < raw.size(); r += 2) rows.push_back(r);
  const auto mean = kalkan::column_mean(x, rows);
  const auto expected = kalkan::reference::scatter(x, rows, mean);

  for (int n : thread_counts()) {
    CAPTURE(n);
    ThreadCount guard(n);
    const auto got = kalkan::scatter(x, rows, mean);
    REQUIRE(got.rows() == expected.rows());
    REQUIRE(got.cols() == expected.cols());
    for (std::size_t r = 0; r < got.rows(); ++r) {
      for (std::size_t c = 0; c < got.cols(); ++c) {
        CHECK(got.at(r, c) == expected.at(r, c));
      }
    }
  }
}

TEST_CASE("histogram binning is thread-count independent") {
  const auto x = boost_matrix();
  ThreadCount base(1);
  const auto expected = kalkan::build_histograms(x, 16);

  for (int n : thread_counts()) {
    CAPTURE(n);
    ThreadCount guard(n);
    const auto got = kalkan::build_histograms(x, 16);
    REQUIRE(got.cuts == expected.cuts);
  }
}

TEST_CASE("leafwise boosting predictions are thread-count independent") {
  const auto x = boost_matrix();
  const auto y = boost_labels(x);
  const auto spec = kalkan::make_spec(
      kalkan::ModelKind::lgbm_style,
      kalkan::ParamMap{{"rounds", std::int64_t{20}},
                       {"min_child", std::int64_t{2}}});

  ThreadCount base(1);
  const auto reference_model = kalkan::fit_model(spec, x, y, 3);
  const auto expected = kalkan::predict_proba(reference_model, x);

  for (int n : thread_counts()) {
    CAPTURE(n);
    ThreadCount guard(n);
    const auto model = kalkan::fit_model(spec, x, y, 3);
    const auto got = kalkan::predict_proba(model, x);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == expected[i]);
  }
}
