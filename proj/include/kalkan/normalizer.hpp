#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kalkan {

struct SlangLexicon {
  std::unordered_map<std::string, std::string> exact;  // variant -> canonical
  struct FuzzyEntry {
    std::u32string variant;
    std::string canonical;
  };
  std::vector<FuzzyEntry> fuzzy;  // sorted by variant for deterministic scans
};

struct NormalizerConfig {
  std::unordered_set<std::string> stopwords;
  SlangLexicon lexicon;
  std::uint32_t max_edit_distance = 1;
  std::uint32_t min_fuzzy_length = 5;  // in Unicode scalars
};

// Turkish-aware lowercasing: I -> dotless i, dotted capital I -> i, and the
// usual Latin-1 / Latin Extended-A case pairs.
std::string turkish_lowercase(std::string_view text);

// Noise stripping in fixed order over lowercased text: URLs, @mentions, the
// standalone token "rt", punctuation/symbols to spaces, digits to spaces,
// whitespace collapse + trim. Letters outside the Latin repertoire used by
// Turkish are treated as symbols.
std::string strip_noise(std::string_view lowercased);

// Character runs of length >= 3 collapse to one occurrence; runs of exactly
// two survive (Turkish geminates such as "anne"). Operates on scalars.
std::string collapse_repeats(std::string_view token);

// Exact lexicon hit wins; otherwise tokens of at least min_fuzzy_length
// scalars match lexicon variants within max_edit_distance Levenshtein edits
// (nearest distance first, ties by lexicographic canonical form).
std::string normalize_slang(std::string_view token, const NormalizerConfig& cfg);

// Whitespace tokenization plus stopword filtering.
std::vector<std::string> tokenize_and_filter(std::string_view text,
                                             const NormalizerConfig& cfg);

// Full pipeline: lowercase, strip noise, tokenize/filter, collapse repeats
// and canonicalize slang per token, drop empties. Tokens that become
// stopwords through collapsing or canonicalization are dropped too, which
// makes the pipeline idempotent.
std::vector<std::string> normalize_document(std::string_view raw,
                                            const NormalizerConfig& cfg);

std::vector<std::vector<std::string>> normalize_corpus(
    const std::vector<std::string>& texts, const NormalizerConfig& cfg);

namespace reference {
// Serial twin of normalize_corpus, kept for kernel-equality tests.
std::vector<std::vector<std::string>> normalize_corpus(
    const std::vector<std::string>& texts, const NormalizerConfig& cfg);
}  // namespace reference

// Asset loaders. Stopword files carry one token per line; the lexicon is
// TSV variant<TAB>canonical. Both allow '#' comment lines and blank lines.
std::unordered_set<std::string> load_stopwords(const std::string& path);
SlangLexicon load_slang_lexicon(const std::string& path);
NormalizerConfig load_normalizer_config(const std::string& stopwords_path,
                                        const std::string& lexicon_path);

// Bounded Levenshtein distance over Unicode scalars; returns cap + 1 when
// the distance exceeds cap.
std::uint32_t levenshtein_bounded(const std::u32string& a,
                                  const std::u32string& b, std::uint32_t cap);

}  // namespace kalkan
