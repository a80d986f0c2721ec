#include "kalkan/normalizer.hpp"

#include <algorithm>
#include <fstream>

#include "kalkan/errors.hpp"
#include "kalkan/parallel.hpp"
#include "kalkan/utf8.hpp"

namespace kalkan {

namespace {

char32_t lower_scalar(char32_t c) {
  if (c == U'I') return U'ı';  // Turkish: I -> dotless i
  if (c == U'İ') return U'i';  // Turkish: dotted capital I -> i
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  // Latin-1 supplement (multiplication sign excluded)
  if (c >= 0xc0 && c <= 0xde && c != 0xd7) return c + 0x20;
  // Latin Extended-A case pairs
  if (c >= 0x100 && c <= 0x137 && (c % 2) == 0) return c + 1;
  if (c >= 0x139 && c <= 0x148 && (c % 2) == 1) return c + 1;
  if (c >= 0x14a && c <= 0x177 && (c % 2) == 0) return c + 1;
  if (c == 0x178) return 0xff;  // Y with diaeresis
  if (c >= 0x179 && c <= 0x17d && (c % 2) == 1) return c + 1;
  return c;
}

// Letter repertoire kept by strip_noise; anything else non-whitespace is
// treated as a symbol. Covers ASCII plus the Latin-1/Extended-A letters
// (all Turkish letters included); other scripts and emoji are noise here.
bool is_letter(char32_t c) {
  if (c >= U'a' && c <= U'z') return true;
  if (c >= U'A' && c <= U'Z') return true;
  if (c >= 0xc0 && c <= 0xff && c != 0xd7 && c != 0xf7) return true;
  if (c >= 0x100 && c <= 0x17f) return true;
  return false;
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

// Removes pattern occurrences through the next whitespace byte. UTF-8 safe:
// patterns and whitespace are ASCII, continuation bytes have the high bit.
std::string drop_through_whitespace(std::string_view text,
                                    std::string_view pattern) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.compare(i, pattern.size(), pattern) == 0) {
      while (i < text.size() && !is_ascii_space(text[i])) ++i;
    } else {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

std::string drop_mentions(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '@') {
      ++i;
      while (i < text.size() && !is_ascii_space(text[i])) ++i;
    } else {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

std::string drop_standalone_rt(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    bool at_boundary = i == 0 || is_ascii_space(text[i - 1]);
    if (at_boundary && text.compare(i, 2, "rt") == 0 &&
        (i + 2 == text.size() || is_ascii_space(text[i + 2]))) {
      i += 2;
      continue;
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

}  // namespace

std::string turkish_lowercase(std::string_view text) {
  std::u32string scalars = utf8::decode(text);
  for (auto& c : scalars) c = lower_scalar(c);
  return utf8::encode(scalars);
}

std::string strip_noise(std::string_view lowercased) {
  std::string pass = drop_through_whitespace(lowercased, "http://");
  pass = drop_through_whitespace(pass, "https://");
  pass = drop_through_whitespace(pass, "www.");
  pass = drop_mentions(pass);
  pass = drop_standalone_rt(pass);

  std::u32string scalars = utf8::decode(pass);
  std::u32string cleaned;
  cleaned.reserve(scalars.size());
  bool pending_space = false;
  for (char32_t c : scalars) {
    bool keep = is_letter(c);
    if (keep) {
      if (pending_space && !cleaned.empty()) cleaned.push_back(U' ');
      pending_space = false;
      cleaned.push_back(c);
    } else {
      // whitespace, digits, punctuation and symbols all become separators
      pending_space = true;
    }
  }
  return utf8::encode(cleaned);
}

std::string collapse_repeats(std::string_view token) {
  std::u32string scalars = utf8::decode(token);
  std::u32string out;
  out.reserve(scalars.size());
  std::size_t i = 0;
  while (i < scalars.size()) {
    std::size_t run = i + 1;
    while (run < scalars.size() && scalars[run] == scalars[i]) ++run;
    std::size_t length = run - i;
    if (length >= 3) {
      out.push_back(scalars[i]);
    } else {
      out.append(length, scalars[i]);
    }
    i = run;
  }
  return utf8::encode(out);
}

std::uint32_t levenshtein_bounded(const std::u32string& a,
                                  const std::u32string& b, std::uint32_t cap) {
  const std::size_t n = a.size(), m = b.size();
  std::size_t diff = n > m ? n - m : m - n;
  if (diff > cap) return cap + 1;
  std::vector<std::uint32_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<std::uint32_t>(i);
    std::uint32_t row_min = cur[0];
    for (std::size_t j = 1; j <= m; ++j) {
      std::uint32_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > cap) return cap + 1;
    std::swap(prev, cur);
  }
  return prev[m] > cap ? cap + 1 : prev[m];
}

std::string normalize_slang(std::string_view token, const NormalizerConfig& cfg) {
  auto hit = cfg.lexicon.exact.find(std::string(token));
  if (hit != cfg.lexicon.exact.end()) return hit->second;

  std::u32string scalars = utf8::decode(token);
  if (scalars.size() < cfg.min_fuzzy_length) return std::string(token);

  std::uint32_t best_distance = cfg.max_edit_distance + 1;
  const std::string* best_canonical = nullptr;
  for (const auto& entry : cfg.lexicon.fuzzy) {
    std::uint32_t d =
        levenshtein_bounded(scalars, entry.variant, cfg.max_edit_distance);
    if (d > cfg.max_edit_distance) continue;
    if (d < best_distance ||
        (d == best_distance &&
         (best_canonical == nullptr || entry.canonical < *best_canonical))) {
      best_distance = d;
      best_canonical = &entry.canonical;
    }
  }
  return best_canonical ? *best_canonical : std::string(token);
}

std::vector<std::string> tokenize_and_filter(std::string_view text,
                                             const NormalizerConfig& cfg) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ascii_space(text[i])) ++i;
    if (i >= text.size()) break;
    std::size_t begin = i;
    while (i < text.size() && !is_ascii_space(text[i])) ++i;
    std::string token(text.substr(begin, i - begin));
    if (cfg.stopwords.count(token) == 0) tokens.push_back(std::move(token));
  }
  return tokens;
}

std::vector<std::string> normalize_document(std::string_view raw,
                                            const NormalizerConfig& cfg) {
  std::string lowered = turkish_lowercase(raw);
  std::string stripped = strip_noise(lowered);
  std::vector<std::string> tokens = tokenize_and_filter(stripped, cfg);
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (auto& token : tokens) {
    std::string collapsed = collapse_repeats(token);
    std::string canonical = normalize_slang(collapsed, cfg);
    // Second stopword check: collapsing or canonicalization can mint a
    // stopword (an elongated one slips past the first filter). Without this
    // the pipeline would not be idempotent.
    if (canonical.empty() || cfg.stopwords.count(canonical) != 0) continue;
    out.push_back(std::move(canonical));
  }
  return out;
}

std::vector<std::vector<std::string>> normalize_corpus(
    const std::vector<std::string>& texts, const NormalizerConfig& cfg) {
  std::vector<std::vector<std::string>> out(texts.size());
  parallel_for(static_cast<std::ptrdiff_t>(texts.size()),
               [&](std::size_t i) { out[i] = normalize_document(texts[i], cfg); });
  return out;
}

namespace reference {
std::vector<std::vector<std::string>> normalize_corpus(
    const std::vector<std::string>& texts, const NormalizerConfig& cfg) {
  std::vector<std::vector<std::string>> out;
  out.reserve(texts.size());
  for (const auto& text : texts) out.push_back(normalize_document(text, cfg));
  return out;
}
}  // namespace reference

namespace {

std::vector<std::string> read_asset_lines(const std::string& path,
                                          const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorKind::Asset, std::string("cannot open ") + what + ": " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::unordered_set<std::string> words;
  for (const auto& line : read_asset_lines(path, "stopword list")) {
    if (!utf8::is_valid(line)) {
      raise(ErrorKind::Asset, "stopword list is not valid UTF-8: " + path);
    }
    words.insert(line);
  }
  return words;
}

SlangLexicon load_slang_lexicon(const std::string& path) {
  SlangLexicon lexicon;
  for (const auto& line : read_asset_lines(path, "slang lexicon")) {
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      raise(ErrorKind::Asset,
            "slang lexicon line is not variant<TAB>canonical: '" + line + "'");
    }
    std::string variant = line.substr(0, tab);
    std::string canonical = line.substr(tab + 1);
    if (!utf8::is_valid(variant) || !utf8::is_valid(canonical)) {
      raise(ErrorKind::Asset, "slang lexicon is not valid UTF-8: " + path);
    }
    auto [it, inserted] = lexicon.exact.emplace(variant, canonical);
    if (!inserted && it->second != canonical) {
      raise(ErrorKind::Asset,
            "slang lexicon maps variant '" + variant + "' twice");
    }
  }
  lexicon.fuzzy.reserve(lexicon.exact.size());
  for (const auto& [variant, canonical] : lexicon.exact) {
    lexicon.fuzzy.push_back({utf8::decode(variant), canonical});
  }
  std::sort(lexicon.fuzzy.begin(), lexicon.fuzzy.end(),
            [](const auto& a, const auto& b) { return a.variant < b.variant; });
  return lexicon;
}

NormalizerConfig load_normalizer_config(const std::string& stopwords_path,
                                        const std::string& lexicon_path) {
  NormalizerConfig cfg;
  cfg.stopwords = load_stopwords(stopwords_path);
  cfg.lexicon = load_slang_lexicon(lexicon_path);
  return cfg;
}

}  // namespace kalkan
