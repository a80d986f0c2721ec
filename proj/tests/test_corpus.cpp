#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "helpers.hpp"
#include "kalkan/corpus.hpp"
#include "kalkan/errors.hpp"

using kalkan::Error;
using kalkan::ErrorKind;
using kalkan::LabeledCorpus;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream file(path, std::ios::binary);
  file << content;
  file.close();
  return path.string();
}

LabeledCorpus balanced_corpus(std::size_t n_neg, std::size_t n_pos) {
  LabeledCorpus corpus;
  corpus.provenance = "synthetic";
  for (std::size_t i = 0; i < n_neg; ++i)
    corpus.docs.push_back({"neg " + std::to_string(i), 0});
  for (std::size_t i = 0; i < n_pos; ++i)
    corpus.docs.push_back({"pos " + std::to_string(i), 1});
  return corpus;
}

}  // namespace

TEST_CASE("load_corpus reads text and labels through quoting") {
  const std::string path = write_temp(
      "corpus_ok.csv",
      "id,message,cyberbullying\n"
      "1,\"hey, you\",1\n"
      "2,normal day,0\n"
      "3,\"line\nbreak\",1\n");
  const LabeledCorpus corpus = kalkan::load_corpus(path);
  REQUIRE(corpus.docs.size() == 3);
  CHECK(corpus.docs[0].text == "hey, you");
  CHECK(corpus.docs[0].label == 1);
  CHECK(corpus.docs[1].label == 0);
  CHECK(corpus.docs[2].text == "line\nbreak");
  CHECK(corpus.provenance == path);
  std::remove(path.c_str());
}

TEST_CASE("load_corpus honors a custom schema") {
  const std::string path = write_temp("corpus_schema.csv",
                                      "text,label\nmerhaba,0\nsalak,1\n");
  kalkan::CsvSchema schema;
  schema.text_col = "text";
  schema.label_col = "label";
  const LabeledCorpus corpus = kalkan::load_corpus(path, schema);
  CHECK(corpus.docs.size() == 2);
  std::remove(path.c_str());
}

TEST_CASE("load_corpus error domains") {
  const std::string missing_col =
      write_temp("corpus_missing.csv", "message,other\nhello,1\n");
  try {
    kalkan::load_corpus(missing_col);
    FAIL("missing column accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Schema);
    CHECK(std::string(e.what()).find("cyberbullying") != std::string::npos);
  }
  std::remove(missing_col.c_str());

  const std::string bad_label = write_temp(
      "corpus_badlabel.csv", "message,cyberbullying\nok,0\nbad,2\n");
  try {
    kalkan::load_corpus(bad_label);
    FAIL("label outside {0,1} accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Row);
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  std::remove(bad_label.c_str());

  const std::string empty =
      write_temp("corpus_empty.csv", "message,cyberbullying\n");
  try {
    kalkan::load_corpus(empty);
    FAIL("empty corpus accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Data);
  }
  std::remove(empty.c_str());

  CHECK_THROWS_AS(kalkan::load_corpus("/nonexistent/x.csv"), Error);
}

TEST_CASE("stratified_split hits the documented counts") {
  // 6 negatives, 4 positives, fraction 0.3: total test = floor(10*0.3+0.5)=3.
  // Per-label floors are 1 and 1; the remaining seat goes to the larger
  // fractional remainder (negatives: 0.8 vs positives: 0.2).
  const LabeledCorpus corpus = balanced_corpus(6, 4);
  kalkan::SplitConfig cfg;
  cfg.test_fraction = 0.3;
  cfg.seed = 7;
  const kalkan::SplitResult split = kalkan::stratified_split(corpus, cfg);
  CHECK(split.test.docs.size() == 3);
  CHECK(split.train.docs.size() == 7);
  std::size_t test_neg = 0, test_pos = 0;
  for (const auto& d : split.test.docs) (d.label ? test_pos : test_neg)++;
  CHECK(test_neg == 2);
  CHECK(test_pos == 1);
}

TEST_CASE("stratified_split is a deterministic order-preserving partition") {
  const LabeledCorpus corpus = balanced_corpus(30, 20);
  kalkan::SplitConfig cfg;
  cfg.test_fraction = 0.25;
  cfg.seed = 42;
  const auto a = kalkan::stratified_split(corpus, cfg);
  const auto b = kalkan::stratified_split(corpus, cfg);
  REQUIRE(a.train.docs.size() == b.train.docs.size());
  for (std::size_t i = 0; i < a.train.docs.size(); ++i)
    CHECK(a.train.docs[i].text == b.train.docs[i].text);

  // Partition: every document appears in exactly one side.
  std::multiset<std::string> seen;
  for (const auto& d : a.train.docs) seen.insert(d.text);
  for (const auto& d : a.test.docs) seen.insert(d.text);
  std::multiset<std::string> expected;
  for (const auto& d : corpus.docs) expected.insert(d.text);
  CHECK(seen == expected);

  // Input order preserved within each side.
  const auto position = [&](const std::string& text) {
    for (std::size_t i = 0; i < corpus.docs.size(); ++i)
      if (corpus.docs[i].text == text) return i;
    return corpus.docs.size();
  };
  for (std::size_t i = 1; i < a.train.docs.size(); ++i)
    CHECK(position(a.train.docs[i - 1].text) < position(a.train.docs[i].text));
  for (std::size_t i = 1; i < a.test.docs.size(); ++i)
    CHECK(position(a.test.docs[i - 1].text) < position(a.test.docs[i].text));

  cfg.seed = 43;
  const auto c = kalkan::stratified_split(corpus, cfg);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.test.docs.size(); ++i)
    any_difference |= (a.test.docs[i].text != c.test.docs[i].text);
  CHECK(any_difference);
}

TEST_CASE("stratified_split rejects impossible configurations") {
  const LabeledCorpus corpus = balanced_corpus(4, 4);
  kalkan::SplitConfig cfg;
  cfg.test_fraction = 0.0;
  CHECK_THROWS_AS(kalkan::stratified_split(corpus, cfg), Error);
  cfg.test_fraction = 1.0;
  CHECK_THROWS_AS(kalkan::stratified_split(corpus, cfg), Error);
  try {
    cfg.test_fraction = -0.2;
    kalkan::stratified_split(corpus, cfg);
    FAIL("negative fraction accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Stratification);
  }
}

TEST_CASE("corpus_stats computes exact counts and means") {
  LabeledCorpus corpus;
  corpus.docs.push_back({"ab cd", 0});     // 5 scalars, 2 words, mean len 2
  corpus.docs.push_back({"çok iyi ya", 0}); // 10 scalars, 3 words, mean 8/3
  corpus.docs.push_back({"xyzw", 1});      // 4 scalars, 1 word, mean len 4
  const kalkan::EdaReport r = kalkan::corpus_stats(corpus);
  CHECK(r.n_documents == 3);
  CHECK(r.label_counts[0] == 2);
  CHECK(r.label_counts[1] == 1);
  CHECK(r.mean_chars[0] == doctest::Approx(7.5).epsilon(1e-12));
  CHECK(r.mean_chars[1] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r.mean_words[0] == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(r.mean_words[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.mean_word_length[0] == doctest::Approx((2.0 + 8.0 / 3.0) / 2));
  CHECK(r.mean_word_length[1] == doctest::Approx(4.0));

  // Histograms: 20 shared bins covering every document once per label.
  for (const kalkan::Histogram* h :
       {&r.char_counts, &r.word_counts, &r.word_lengths}) {
    CHECK(h->bins.size() == 20);
    std::uint64_t neg = 0, pos = 0;
    for (const auto& bin : h->bins) {
      neg += bin[0];
      pos += bin[1];
    }
    CHECK(neg == 2);
    CHECK(pos == 1);
  }
  CHECK_THROWS_AS(kalkan::corpus_stats(LabeledCorpus{}), Error);
}
