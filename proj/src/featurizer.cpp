#include "kalkan/featurizer.hpp"

#include <algorithm>
#include <cmath>

#include "kalkan/errors.hpp"
#include "kalkan/parallel.hpp"

namespace kalkan {

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            const VocabularyConfig& cfg) {
  if (cfg.min_df == 0) raise(ErrorKind::Parameter, "min_df must be at least 1");

  struct TermStat {
    std::uint64_t first_seen = 0;
    std::uint32_t df = 0;
  };
  std::unordered_map<std::string, TermStat> stats;
  std::uint64_t order = 0;

  std::vector<const std::string*> seen_in_doc;
  for (const auto& doc : docs) {
    seen_in_doc.clear();
    for (const auto& tok : doc) {
      auto [it, inserted] = stats.try_emplace(tok);
      if (inserted) it->second.first_seen = order++;
      // Count each term once per document.
      if (std::find_if(seen_in_doc.begin(), seen_in_doc.end(),
                       [&](const std::string* s) { return *s == tok; }) ==
          seen_in_doc.end()) {
        it->second.df += 1;
        seen_in_doc.push_back(&it->first);
      }
    }
  }

  struct Retained {
    const std::string* term;
    std::uint64_t first_seen;
    std::uint32_t df;
  };
  std::vector<Retained> retained;
  retained.reserve(stats.size());
  for (const auto& [term, stat] : stats)
    if (stat.df >= cfg.min_df) retained.push_back({&term, stat.first_seen, stat.df});
  std::sort(retained.begin(), retained.end(),
            [](const Retained& a, const Retained& b) { return a.first_seen < b.first_seen; });

  Vocabulary vocab;
  vocab.n_documents = docs.size();
  vocab.terms.reserve(retained.size());
  vocab.df.reserve(retained.size());
  for (const auto& r : retained) {
    vocab.index.emplace(*r.term, static_cast<std::uint32_t>(vocab.terms.size()));
    vocab.terms.push_back(*r.term);
    vocab.df.push_back(r.df);
  }
  return vocab;
}

IdfModel fit_idf(const Vocabulary& vocab) {
  IdfModel model;
  model.idf.resize(vocab.size());
  const double n = static_cast<double>(vocab.n_documents);
  for (std::size_t t = 0; t < vocab.size(); ++t)
    model.idf[t] = std::log((1.0 + n) / (1.0 + static_cast<double>(vocab.df[t]))) + 1.0;
  return model;
}

SparseVector count_vector(const Vocabulary& vocab,
                          const std::vector<std::string>& tokens) {
  std::unordered_map<std::uint32_t, double> counts;
  for (const auto& tok : tokens) {
    auto it = vocab.index.find(tok);
    if (it != vocab.index.end()) counts[it->second] += 1.0;
  }
  SparseVector row;
  row.entries.reserve(counts.size());
  for (const auto& [idx, c] : counts) row.entries.push_back({idx, c});
  std::sort(row.entries.begin(), row.entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  return row;
}

void apply_tfidf(SparseVector& row, const IdfModel& idf) {
  for (auto& e : row.entries) {
    if (e.index >= idf.idf.size())
      raise(ErrorKind::Shape, "feature index outside idf table");
    e.value *= idf.idf[e.index];
  }
  const double norm = row.l2_norm();
  if (norm > 0.0)
    for (auto& e : row.entries) e.value /= norm;
}

namespace {

SparseVector make_row(const Vocabulary& vocab, const IdfModel& idf,
                      const std::vector<std::string>& tokens) {
  SparseVector row = count_vector(vocab, tokens);
  apply_tfidf(row, idf);
  return row;
}

}  // namespace

SparseMatrix vectorize_corpus(const Vocabulary& vocab, const IdfModel& idf,
                              const std::vector<std::vector<std::string>>& docs) {
  SparseMatrix x(static_cast<std::uint32_t>(vocab.size()));
  x.resize_rows(docs.size());
  parallel_for(static_cast<std::ptrdiff_t>(docs.size()), [&](std::ptrdiff_t i) {
    x.mutable_row(static_cast<std::size_t>(i)) =
        make_row(vocab, idf, docs[static_cast<std::size_t>(i)]);
  });
  return x;
}

namespace reference {

SparseMatrix vectorize_corpus(const Vocabulary& vocab, const IdfModel& idf,
                              const std::vector<std::vector<std::string>>& docs) {
  SparseMatrix x(static_cast<std::uint32_t>(vocab.size()));
  x.resize_rows(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i)
    x.mutable_row(i) = make_row(vocab, idf, docs[i]);
  return x;
}

}  // namespace reference

}  // namespace kalkan
