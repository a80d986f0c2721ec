#pragma once

#include <stdexcept>
#include <string>

namespace kalkan {

// Error domains surfaced by the toolkit. The CLI maps usage problems to exit
// code 1 and every kind below to exit code 2.
enum class ErrorKind {
  Schema,          // CSV header / missing column
  Row,             // bad row content (label domain, arity)
  Encoding,        // invalid UTF-8
  Parameter,       // bad hyperparameter or config value
  Stratification,  // split impossible (empty label, bad fraction)
  Shape,           // matrix/vector dimension mismatch
  Data,            // degenerate data where not tolerated
  Spec,            // malformed classifier spec
  Compatibility,   // vocabulary fingerprint mismatch
  Migration,       // unsupported model format version
  Integrity,       // checksum mismatch / corrupt model file
  Asset,           // missing or unreadable bundled asset
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

}  // namespace kalkan
