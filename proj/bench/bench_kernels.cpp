// Times the OpenMP-parallel kernels against their serial reference twins on
// a generated workload and checks the outputs are bit-identical. Exits
// nonzero on any mismatch so the comparison doubles as a correctness gate.
//
// Usage: kalkan_bench [n_docs] [repeats]
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "kalkan/featurizer.hpp"
#include "kalkan/normalizer.hpp"
#include "kalkan/random.hpp"
#include "kalkan/utf8.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

kalkan::NormalizerConfig make_config() {
  kalkan::NormalizerConfig cfg;
  cfg.stopwords = {"ve", "bir", "bu", "çok", "sen", "ben", "de", "da"};
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"salak", "salak"}, {"salaq", "salak"},   {"aptal", "aptal"},
      {"abtal", "aptal"}, {"guzel", "güzel"},   {"güzel", "güzel"},
      {"merhaba", "merhaba"}, {"mrb", "merhaba"}};
  for (const auto& [variant, canonical] : pairs) {
    cfg.lexicon.exact.emplace(variant, canonical);
    cfg.lexicon.fuzzy.push_back({kalkan::utf8::decode(variant), canonical});
  }
  std::sort(cfg.lexicon.fuzzy.begin(), cfg.lexicon.fuzzy.end(),
            [](const auto& a, const auto& b) { return a.variant < b.variant; });
  return cfg;
}

std::vector<std::string> make_texts(std::size_t n_docs) {
  const std::vector<std::string> words = {
      "salak",   "aptal",  "güzel",  "merhaba", "okul",   "kitap",
      "kahve",   "deniz",  "sabah",  "telefon", "çiçek",  "müzik",
      "yemek",   "sokak",  "bu",     "çok",     "salaaak", "abtal"};
  kalkan::SplitMix64 rng(7);
  std::vector<std::string> texts(n_docs);
  for (auto& text : texts) {
    const std::size_t n_words = 6 + rng.next_below(10);
    for (std::size_t w = 0; w < n_words; ++w) {
      if (w) text += ' ';
      text += words[rng.next_below(words.size())];
    }
    if (rng.next_double() < 0.3) text += " http://t.co/abc123 !!!";
    if (rng.next_double() < 0.3) text = "RT @biri: " + text + " 42";
  }
  return texts;
}

bool same_tokens(const std::vector<std::vector<std::string>>& a,
                 const std::vector<std::vector<std::string>>& b) {
  return a == b;
}

bool same_matrix(const kalkan::SparseMatrix& a, const kalkan::SparseMatrix& b) {
  if (a.n_rows() != b.n_rows() || a.n_features != b.n_features) return false;
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    const auto& ra = a.row(i).entries;
    const auto& rb = b.row(i).entries;
    if (ra.size() != rb.size()) return false;
    for (std::size_t j = 0; j < ra.size(); ++j) {
      if (ra[j].index != rb[j].index || ra[j].value != rb[j].value)
        return false;
    }
  }
  return true;
}

void report(const char* kernel, double serial, double parallel, bool identical) {
  std::printf("%-18s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n",
              kernel, serial, parallel, serial / parallel,
              identical ? "outputs identical" : "OUTPUT MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n_docs =
      argc > 1 ? static_cast<std::size_t>(std::atoll(argv[1])) : 20000;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;

  const kalkan::NormalizerConfig cfg = make_config();
  const std::vector<std::string> texts = make_texts(n_docs);
  std::printf("workload: %zu documents, %d repeats\n", texts.size(), repeats);

  bool all_identical = true;

  std::vector<std::vector<std::string>> tokens_parallel, tokens_serial;
  double serial_s = 0.0, parallel_s = 0.0;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = Clock::now();
    tokens_parallel = kalkan::normalize_corpus(texts, cfg);
    parallel_s += time_seconds(t0);
    t0 = Clock::now();
    tokens_serial = kalkan::reference::normalize_corpus(texts, cfg);
    serial_s += time_seconds(t0);
  }
  const bool tokens_same = same_tokens(tokens_parallel, tokens_serial);
  all_identical = all_identical && tokens_same;
  report("normalize_corpus", serial_s, parallel_s, tokens_same);

  const kalkan::Vocabulary vocab = kalkan::build_vocabulary(tokens_serial);
  const kalkan::IdfModel idf = kalkan::fit_idf(vocab);
  kalkan::SparseMatrix x_parallel, x_serial;
  serial_s = parallel_s = 0.0;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = Clock::now();
    x_parallel = kalkan::vectorize_corpus(vocab, idf, tokens_serial);
    parallel_s += time_seconds(t0);
    t0 = Clock::now();
    x_serial = kalkan::reference::vectorize_corpus(vocab, idf, tokens_serial);
    serial_s += time_seconds(t0);
  }
  const bool matrix_same = same_matrix(x_parallel, x_serial);
  all_identical = all_identical && matrix_same;
  report("vectorize_corpus", serial_s, parallel_s, matrix_same);

  return all_identical ? 0 : 1;
}
