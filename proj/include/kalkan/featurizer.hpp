#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "kalkan/sparse.hpp"

namespace kalkan {

// Unigram vocabulary over normalized token lists. Term indices follow first
// occurrence order in the fitting corpus, counted over the retained terms
// only, so the mapping is reproducible from the corpus alone.
struct Vocabulary {
  std::vector<std::string> terms;                      // index -> term
  std::unordered_map<std::string, std::uint32_t> index;  // term -> index
  std::vector<std::uint32_t> df;                       // index -> document frequency
  std::uint64_t n_documents = 0;                       // fitting corpus size
  std::size_t size() const { return terms.size(); }
};

struct VocabularyConfig {
  std::uint32_t min_df = 2;  // terms seen in fewer documents are dropped
};

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            const VocabularyConfig& cfg = {});

// Smoothed inverse document frequency: idf_t = ln((1 + n) / (1 + df_t)) + 1,
// with n the number of fitting documents. Strictly positive for any df.
struct IdfModel {
  std::vector<double> idf;
};

IdfModel fit_idf(const Vocabulary& vocab);

// Raw in-vocabulary term counts for one document, entries sorted by index.
SparseVector count_vector(const Vocabulary& vocab,
                          const std::vector<std::string>& tokens);

// Scales counts by idf and L2-normalizes in place. All-zero rows stay zero.
void apply_tfidf(SparseVector& row, const IdfModel& idf);

// Full pipeline over a corpus of token lists. The parallel version writes
// each output row from exactly one loop index, so its result is bit-identical
// to the serial reference below for any thread count.
SparseMatrix vectorize_corpus(const Vocabulary& vocab, const IdfModel& idf,
                              const std::vector<std::vector<std::string>>& docs);

namespace reference {
SparseMatrix vectorize_corpus(const Vocabulary& vocab, const IdfModel& idf,
                              const std::vector<std::vector<std::string>>& docs);
}  // namespace reference

}  // namespace kalkan
