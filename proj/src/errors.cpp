#include "kalkan/errors.hpp"

namespace kalkan {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Row: return "row";
    case ErrorKind::Encoding: return "encoding";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Stratification: return "stratification";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Data: return "data";
    case ErrorKind::Spec: return "spec";
    case ErrorKind::Compatibility: return "compatibility";
    case ErrorKind::Migration: return "migration";
    case ErrorKind::Integrity: return "integrity";
    case ErrorKind::Asset: return "asset";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message),
      kind_(kind) {}

void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace kalkan
