#include "kalkan/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "kalkan/csv.hpp"
#include "kalkan/errors.hpp"
#include "kalkan/random.hpp"
#include "kalkan/utf8.hpp"

namespace kalkan {

namespace {

std::size_t find_column(const CsvTable& table, const std::string& name) {
  std::size_t found = table.header.size();
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] == name) {
      if (found != table.header.size()) {
        raise(ErrorKind::Schema, "duplicate column '" + name + "' in header");
      }
      found = i;
    }
  }
  if (found == table.header.size()) {
    raise(ErrorKind::Schema, "missing column '" + name + "' in header");
  }
  return found;
}

std::string trim_ascii(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(b, e - b + 1);
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

}  // namespace

LabeledCorpus load_corpus(const std::string& path, const CsvSchema& schema) {
  CsvTable table = read_csv(path);
  std::size_t text_idx = find_column(table, schema.text_col);
  std::size_t label_idx = find_column(table, schema.label_col);

  LabeledCorpus corpus;
  corpus.provenance = path;
  corpus.docs.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::string label_str = trim_ascii(row[label_idx]);
    std::uint8_t label;
    if (label_str == "0") {
      label = 0;
    } else if (label_str == "1") {
      label = 1;
    } else {
      raise(ErrorKind::Row, "row " + std::to_string(r + 1) + ": label '" +
                                row[label_idx] + "' not in {0,1}");
    }
    corpus.docs.push_back({row[text_idx], label});
  }
  if (corpus.docs.empty()) {
    raise(ErrorKind::Data, "corpus is empty: " + path);
  }
  return corpus;
}

SplitResult stratified_split(const LabeledCorpus& corpus, const SplitConfig& cfg) {
  if (!(cfg.test_fraction > 0.0) || !(cfg.test_fraction < 1.0)) {
    raise(ErrorKind::Stratification, "test fraction must lie in (0,1)");
  }
  std::array<std::vector<std::size_t>, 2> by_label;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    by_label[corpus.docs[i].label].push_back(i);
  }
  for (int l = 0; l < 2; ++l) {
    if (by_label[l].empty()) {
      raise(ErrorKind::Stratification,
            "label " + std::to_string(l) + " has no documents");
    }
  }

  const double f = cfg.test_fraction;
  const std::size_t target = static_cast<std::size_t>(
      std::floor(static_cast<double>(corpus.docs.size()) * f + 0.5));
  std::array<std::size_t, 2> want{};
  std::array<double, 2> remainder{};
  for (int l = 0; l < 2; ++l) {
    double exact = static_cast<double>(by_label[l].size()) * f;
    want[l] = static_cast<std::size_t>(std::floor(exact));
    remainder[l] = exact - std::floor(exact);
  }
  // extras in decreasing remainder order, ties by label ascending
  std::array<int, 2> order = {0, 1};
  if (remainder[1] > remainder[0]) order = {1, 0};
  std::size_t assigned = want[0] + want[1];
  while (assigned < target) {
    bool granted = false;
    for (int l : order) {
      if (assigned == target) break;
      if (want[l] < by_label[l].size()) {
        ++want[l];
        ++assigned;
        granted = true;
      }
    }
    if (!granted) break;
  }

  std::vector<bool> in_test(corpus.docs.size(), false);
  for (int l = 0; l < 2; ++l) {
    SplitMix64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(l)));
    std::vector<std::size_t> pool = by_label[l];
    seeded_shuffle(pool, rng);
    for (std::size_t i = 0; i < want[l]; ++i) in_test[pool[i]] = true;
  }

  SplitResult result;
  result.train.provenance = corpus.provenance;
  result.test.provenance = corpus.provenance;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    (in_test[i] ? result.test : result.train).docs.push_back(corpus.docs[i]);
  }
  return result;
}

namespace {

struct DocShape {
  std::size_t chars;
  std::size_t words;
  double mean_word_length;  // 0 for empty messages
};

DocShape doc_shape(const std::string& text) {
  DocShape shape{utf8::scalar_count(text), 0, 0.0};
  std::size_t total_token_chars = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ascii_space(text[i])) ++i;
    if (i >= text.size()) break;
    std::size_t begin = i;
    while (i < text.size() && !is_ascii_space(text[i])) ++i;
    ++shape.words;
    total_token_chars += utf8::scalar_count(
        std::string_view(text).substr(begin, i - begin));
  }
  if (shape.words > 0) {
    shape.mean_word_length =
        static_cast<double>(total_token_chars) / static_cast<double>(shape.words);
  }
  return shape;
}

constexpr std::size_t kBins = 20;

Histogram make_integer_histogram(double max_value) {
  Histogram h;
  h.origin = 0.0;
  h.bin_width = std::max(1.0, std::ceil((max_value + 1.0) / kBins));
  h.bins.assign(kBins, {0, 0});
  return h;
}

Histogram make_real_histogram(double max_value) {
  Histogram h;
  h.origin = 0.0;
  h.bin_width = max_value > 0.0 ? max_value / kBins : 1.0;
  h.bins.assign(kBins, {0, 0});
  return h;
}

void add_to_histogram(Histogram& h, double value, int label) {
  auto bin = static_cast<std::size_t>((value - h.origin) / h.bin_width);
  if (bin >= h.bins.size()) bin = h.bins.size() - 1;
  ++h.bins[bin][static_cast<std::size_t>(label)];
}

}  // namespace

EdaReport corpus_stats(const LabeledCorpus& corpus) {
  if (corpus.docs.empty()) {
    raise(ErrorKind::Data, "corpus_stats requires a non-empty corpus");
  }
  std::vector<DocShape> shapes;
  shapes.reserve(corpus.docs.size());
  double max_chars = 0, max_words = 0, max_wlen = 0;
  for (const auto& doc : corpus.docs) {
    shapes.push_back(doc_shape(doc.text));
    max_chars = std::max(max_chars, static_cast<double>(shapes.back().chars));
    max_words = std::max(max_words, static_cast<double>(shapes.back().words));
    max_wlen = std::max(max_wlen, shapes.back().mean_word_length);
  }

  EdaReport report;
  report.n_documents = corpus.docs.size();
  report.char_counts = make_integer_histogram(max_chars);
  report.word_counts = make_integer_histogram(max_words);
  report.word_lengths = make_real_histogram(max_wlen);

  std::array<double, 2> sum_chars{}, sum_words{}, sum_wlen{};
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    int label = corpus.docs[i].label;
    ++report.label_counts[static_cast<std::size_t>(label)];
    sum_chars[label] += static_cast<double>(shapes[i].chars);
    sum_words[label] += static_cast<double>(shapes[i].words);
    sum_wlen[label] += shapes[i].mean_word_length;
    add_to_histogram(report.char_counts, static_cast<double>(shapes[i].chars), label);
    add_to_histogram(report.word_counts, static_cast<double>(shapes[i].words), label);
    add_to_histogram(report.word_lengths, shapes[i].mean_word_length, label);
  }
  for (int l = 0; l < 2; ++l) {
    if (report.label_counts[l] == 0) continue;
    auto n = static_cast<double>(report.label_counts[l]);
    report.mean_chars[l] = sum_chars[l] / n;
    report.mean_words[l] = sum_words[l] / n;
    report.mean_word_length[l] = sum_wlen[l] / n;
  }
  return report;
}

}  // namespace kalkan
