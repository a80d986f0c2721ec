#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "kalkan/featurizer.hpp"
#include "kalkan/model.hpp"

namespace kalkan {

inline constexpr std::int64_t kModelFormatVersion = 1;

std::string sha256_hex(std::string_view bytes);

// Deterministic JSON serialization: object keys in lexicographic order,
// integers in native form, reals via %.17g (which round-trips doubles
// exactly), no whitespace. Checksums and fingerprints hash these bytes, and
// model files are written in this form so identical models produce identical
// files.
std::string canonical_dump(const nlohmann::json& value);

// Content hash of a fitted featurization: canonical {"df", "idf", "terms"}.
// Stamped onto matrices and models so predict can reject mismatched pairs.
std::string vocabulary_fingerprint(const Vocabulary& vocab,
                                   const IdfModel& idf);

// Model file: a canonical JSON envelope {checksum, fingerprint,
// format_version, hyperparameters, kind, metadata, payload, vocabulary}. The
// checksum is the SHA-256 of the canonical payload; the vocabulary holds the
// term, df and idf arrays of the feature space (empty when the model was
// fitted on a raw matrix).
void save_model(const TrainedModel& model, const std::string& path);

// Inverse of save_model. Invalid JSON or a checksum mismatch raises an
// integrity error; a format_version above the supported one raises a
// migration error naming both versions.
TrainedModel load_model(const std::string& path);

}  // namespace kalkan
