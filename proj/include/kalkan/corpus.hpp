#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace kalkan {

struct LabeledDocument {
  std::string text;
  std::uint8_t label;  // 0 or 1 (1 = cyberbullying)
};

struct LabeledCorpus {
  std::vector<LabeledDocument> docs;
  std::string provenance;  // source path or "synthetic"
};

struct CsvSchema {
  std::string text_col = "message";
  std::string label_col = "cyberbullying";
};

// Loads a UTF-8 CSV with a header row. Missing columns are schema errors
// naming the column; labels outside {0,1} are row errors with the 1-based
// data row number; an empty table is a data error.
LabeledCorpus load_corpus(const std::string& path, const CsvSchema& schema = {});

struct SplitConfig {
  double test_fraction = 0.3;
  std::uint64_t seed = 42;
};

struct SplitResult {
  LabeledCorpus train;
  LabeledCorpus test;
};

// Deterministic stratified split. Per-label test count = floor(n_l * f);
// extra documents granted in decreasing fractional-remainder order (ties by
// label ascending) until the total reaches floor(n * f + 0.5). Selection
// within a label uses a seeded Fisher-Yates shuffle; both output corpora
// preserve the input document order.
SplitResult stratified_split(const LabeledCorpus& corpus, const SplitConfig& cfg);

// Shared-edge histogram with per-label counts.
struct Histogram {
  double origin = 0.0;
  double bin_width = 1.0;
  std::vector<std::array<std::uint64_t, 2>> bins;
};

struct EdaReport {
  std::uint64_t n_documents = 0;
  std::array<std::uint64_t, 2> label_counts{};
  std::array<double, 2> mean_chars{};        // Unicode scalars per message
  std::array<double, 2> mean_words{};        // whitespace tokens per message
  std::array<double, 2> mean_word_length{};  // mean over per-message means
  Histogram char_counts;
  Histogram word_counts;
  Histogram word_lengths;
};

// Raw-text statistics: character count in Unicode scalar values, word count
// over ASCII-whitespace tokens, per-message mean word length (0 for empty
// messages). 20 shared bins per histogram.
EdaReport corpus_stats(const LabeledCorpus& corpus);

}  // namespace kalkan
