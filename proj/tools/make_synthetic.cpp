// Regenerates data/synthetic_tr.csv: 2000 balanced Turkish-style messages
// whose positive label correlates with planted harmful tokens. Every content
// word is validated against the bundled normalizer config at generation time
// so the corpus keeps its planned token statistics after preprocessing.
//
// Usage: make_synthetic [out_csv] [stopwords] [lexicon]
// Defaults resolve relative to the working directory (run from the repo
// root): data/synthetic_tr.csv, assets/stopwords_tr.txt, assets/slang_tr.tsv.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "kalkan/normalizer.hpp"
#include "kalkan/random.hpp"

namespace {

using kalkan::NormalizerConfig;
using kalkan::SplitMix64;

// Harmful canonicals from the bundled lexicon.
const std::vector<std::string> kInsults = {
    "salak",   "aptal",  "gerizekali", "mal",     "beyinsiz", "şerefsiz",
    "dangalak", "ahmak",  "yavşak",     "hıyar",   "öküz",     "hödük",
    "zavallı", "iğrenç", "rezil",      "şapşal",  "budala",   "embesil",
    "angut",   "kıro",   "maganda",    "ezik",    "pislik",   "denyo",
    "gavat",   "lavuk"};

// Misspelled variants of the above with their canonicals, from the lexicon.
const std::vector<std::pair<std::string, std::string>> kInsultVariants = {
    {"salag", "salak"},     {"salaq", "salak"},
    {"abtal", "aptal"},     {"apdal", "aptal"},
    {"qerizekali", "gerizekali"}, {"gerzekalı", "gerizekali"},
    {"beyinsis", "beyinsiz"}, {"serefsiz", "şerefsiz"},
    {"yavsak", "yavşak"},   {"hiyar", "hıyar"},
    {"okuz", "öküz"},       {"hoduk", "hödük"},
    {"zavalli", "zavallı"}, {"igrenc", "iğrenç"},
    {"resil", "rezil"},     {"sapsal", "şapşal"},
    {"butala", "budala"},   {"enbesil", "embesil"},
    {"angud", "angut"},     {"kiro", "kıro"},
    {"macanda", "maganda"}, {"ezzik", "ezik"},
    {"pizlik", "pislik"},   {"deyno", "denyo"},
    {"kavat", "gavat"},     {"lawuk", "lavuk"}};

// Friendly canonicals from the lexicon (greetings, kinship terms).
const std::vector<std::string> kFriendly = {
    "selam", "naber", "merhaba", "güzel", "iyi",   "kardeş",
    "abi",   "hocam", "teşekkür", "kanka", "canım", "oğlum"};

const std::vector<std::pair<std::string, std::string>> kFriendlyVariants = {
    {"slm", "selam"},     {"nbr", "naber"},    {"mrb", "merhaba"},
    {"guzel", "güzel"},   {"iyii", "iyi"},     {"kardes", "kardeş"},
    {"abii", "abi"},      {"hcm", "hocam"},    {"tesekkur", "teşekkür"},
    {"knk", "kanka"},     {"canim", "canım"},  {"oglum", "oğlum"}};

// Everyday content words. None is a stopword, none canonicalizes away under
// the bundled lexicon; the generator verifies both before writing anything.
const std::vector<std::string> kNeutral = {
    "okul",     "ders",    "kitap",    "film",      "müzik",    "kahve",
    "sabah",    "akşam",   "kalem",    "defter",    "hafta",    "maç",
    "takım",    "proje",   "toplantı", "rapor",     "sunum",    "tatil",
    "deniz",    "yağmur",  "oyun",     "bilgisayar", "telefon", "fotoğraf",
    "yemek",    "kahvaltı", "çorba",   "ekmek",     "market",   "otobüs",
    "metro",    "trafik",  "yol",      "şehir",     "park",     "bahçe",
    "çiçek",    "kedi",    "köpek",    "kuş",       "aile",     "anne",
    "baba",     "çay",     "spor",     "koşu",      "yürüyüş",  "müze",
    "sinema",   "konser",  "şarkı",    "tahta",     "gazete",   "dergi",
    "bilet",    "uçak",    "tren",     "vapur",     "sokak",    "meydan",
    "pazar",    "salı",    "çarşamba", "perşembe",  "cuma",     "cumartesi",
    "bina",     "öğle",    "gece",     "sınav",     "ödev",     "staj",
    "ofis",     "masa",    "sandalye", "pencere",   "kapı",     "bardak"};

// A few stopwords sprinkled in for texture; the normalizer drops them.
const std::vector<std::string> kStopFiller = {"ve", "bir", "bu", "çok",
                                              "ama", "sen", "ben", "de"};

const std::vector<std::string> kVowels = {"a", "e", "ı", "i",
                                          "o", "ö", "u", "ü"};

std::size_t pick(SplitMix64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng.next_below(n));
}

const std::string& pick(SplitMix64& rng, const std::vector<std::string>& v) {
  return v[pick(rng, v.size())];
}

double uniform(SplitMix64& rng) { return rng.next_double(); }

// Stretches one letter into a run of 3-5 so repeat collapsing has work to do.
std::string elongate(SplitMix64& rng, const std::string& word) {
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < word.size();) {
    const auto c = static_cast<unsigned char>(word[i]);
    std::size_t len = 1;
    if (c >= 0xf0) len = 4;
    else if (c >= 0xe0) len = 3;
    else if (c >= 0xc0) len = 2;
    for (const std::string& v : kVowels) {
      if (word.compare(i, v.size(), v) == 0 && v.size() == len)
        starts.push_back(i);
    }
    i += len;
  }
  if (starts.empty()) return word;
  const std::size_t at = starts[pick(rng, starts.size())];
  std::size_t len = 1;
  const auto c = static_cast<unsigned char>(word[at]);
  if (c >= 0xe0) len = 3;
  else if (c >= 0xc0) len = 2;
  const std::string scalar = word.substr(at, len);
  std::string out = word.substr(0, at);
  const std::size_t repeats = 3 + pick(rng, 3);
  for (std::size_t r = 0; r < repeats; ++r) out += scalar;
  out += word.substr(at + len);
  return out;
}

// Uppercases via the Turkish casing pairs so lowercasing restores the word.
std::string turkish_upper(const std::string& word) {
  static const std::vector<std::pair<std::string, std::string>> kPairs = {
      {"ç", "Ç"}, {"ğ", "Ğ"}, {"ı", "I"}, {"i", "İ"},
      {"ö", "Ö"}, {"ş", "Ş"}, {"ü", "Ü"}};
  std::string out;
  std::size_t i = 0;
  while (i < word.size()) {
    bool matched = false;
    for (const auto& [lo, up] : kPairs) {
      if (word.compare(i, lo.size(), lo) == 0) {
        out += up;
        i += lo.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    char c = word[i];
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    out += c;
    ++i;
  }
  return out;
}

std::string pick_insult(SplitMix64& rng) {
  const double roll = uniform(rng);
  if (roll < 0.60) return pick(rng, kInsults);
  if (roll < 0.85) return kInsultVariants[pick(rng, kInsultVariants.size())].first;
  return elongate(rng, pick(rng, kInsults));
}

std::string pick_friendly(SplitMix64& rng) {
  if (uniform(rng) < 0.7) return pick(rng, kFriendly);
  return kFriendlyVariants[pick(rng, kFriendlyVariants.size())].first;
}

std::string make_message(SplitMix64& rng, bool bullying) {
  std::vector<std::string> words;
  if (bullying) {
    // 4% of positives carry no planted token: irreducible error.
    if (uniform(rng) >= 0.04) {
      const std::size_t n_insults = 1 + pick(rng, 3);
      for (std::size_t i = 0; i < n_insults; ++i)
        words.push_back(pick_insult(rng));
    }
    const std::size_t n_filler = 2 + pick(rng, 4);
    for (std::size_t i = 0; i < n_filler; ++i) {
      words.push_back(uniform(rng) < 0.75 ? pick(rng, kNeutral)
                                          : pick(rng, kStopFiller));
    }
  } else {
    if (uniform(rng) < 0.5) words.push_back(pick_friendly(rng));
    // 3% of negatives borrow an insult in a joking register.
    if (uniform(rng) < 0.03) words.push_back(pick_insult(rng));
    const std::size_t n_filler = 3 + pick(rng, 5);
    for (std::size_t i = 0; i < n_filler; ++i) {
      words.push_back(uniform(rng) < 0.85 ? pick(rng, kNeutral)
                                          : pick(rng, kStopFiller));
    }
  }
  kalkan::seeded_shuffle(words, rng);
  if (uniform(rng) < 0.15) {
    const std::size_t at = pick(rng, words.size());
    words[at] = turkish_upper(words[at]);
  }

  std::string text;
  if (uniform(rng) < 0.2) {
    text += "RT @kul" + std::to_string(1 + pick(rng, 99)) + ": ";
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) text += ' ';
    text += words[i];
    if (uniform(rng) < 0.05) text += ',';
  }
  if (uniform(rng) < 0.2) text += " @arkadas" + std::to_string(pick(rng, 50));
  if (uniform(rng) < 0.15)
    text += " http://t.co/x" + std::to_string(pick(rng, 9999));
  const double punct = uniform(rng);
  if (punct < 0.12) text += "!!!";
  else if (punct < 0.2) text += "...";
  else if (punct < 0.25) text += "?!";
  if (uniform(rng) < 0.08) text += " " + std::to_string(pick(rng, 2030));
  return text;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Every planned content word must survive normalization as itself, and every
// planted variant must canonicalize; otherwise the corpus would drift from
// its design (e.g. a neutral word within edit distance 1 of a slang variant).
bool validate_pools(const NormalizerConfig& cfg) {
  bool ok = true;
  const auto expect = [&](const std::string& raw, const std::string& want) {
    const auto tokens = kalkan::normalize_document(raw, cfg);
    if (tokens.size() != 1 || tokens[0] != want) {
      std::cerr << "pool word '" << raw << "' normalizes to ";
      if (tokens.empty()) {
        std::cerr << "nothing";
      } else {
        std::cerr << "'" << tokens[0] << "'";
      }
      std::cerr << ", expected '" << want << "'\n";
      ok = false;
    }
  };
  for (const auto& w : kInsults) expect(w, w);
  for (const auto& w : kNeutral) expect(w, w);
  for (const auto& w : kFriendly) expect(w, w);
  for (const auto& [variant, canonical] : kInsultVariants) {
    expect(variant, canonical);
  }
  for (const auto& [variant, canonical] : kFriendlyVariants) {
    expect(variant, canonical);
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_path = argc > 1 ? argv[1] : "data/synthetic_tr.csv";
  const std::string stopwords =
      argc > 2 ? argv[2] : "assets/stopwords_tr.txt";
  const std::string lexicon = argc > 3 ? argv[3] : "assets/slang_tr.tsv";

  const NormalizerConfig cfg =
      kalkan::load_normalizer_config(stopwords, lexicon);
  if (!validate_pools(cfg)) return 1;

  constexpr std::size_t kRowsPerLabel = 1000;
  SplitMix64 rng(20240817u);

  std::vector<std::pair<std::string, int>> rows;
  rows.reserve(2 * kRowsPerLabel);
  for (std::size_t i = 0; i < kRowsPerLabel; ++i) {
    rows.emplace_back(make_message(rng, true), 1);
    rows.emplace_back(make_message(rng, false), 0);
  }
  kalkan::seeded_shuffle(rows, rng);

  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    std::cerr << "cannot open " << out_path << "\n";
    return 1;
  }
  file << "message,cyberbullying\n";
  for (const auto& [text, label] : rows) {
    file << csv_field(text) << ',' << label << '\n';
  }
  if (!file.flush()) {
    std::cerr << "write failed for " << out_path << "\n";
    return 1;
  }
  std::cerr << "wrote " << rows.size() << " rows to " << out_path << "\n";
  return 0;
}
