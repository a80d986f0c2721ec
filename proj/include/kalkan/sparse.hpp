#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "kalkan/errors.hpp"

namespace kalkan {

struct SparseEntry {
  std::uint32_t index;
  double value;
};

// One document: entries sorted by index, indices unique, values finite.
// Range-iteration walks the stored entries.
struct SparseVector {
  std::vector<SparseEntry> entries;

  auto begin() { return entries.begin(); }
  auto end() { return entries.end(); }
  auto begin() const { return entries.begin(); }
  auto end() const { return entries.end(); }

  double l2_norm_squared() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.value * e.value;
    return s;
  }

  double l2_norm() const { return std::sqrt(l2_norm_squared()); }

  double dot(const SparseVector& other) const {
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < entries.size() && j < other.entries.size()) {
      std::uint32_t a = entries[i].index, b = other.entries[j].index;
      if (a == b) {
        s += entries[i].value * other.entries[j].value;
        ++i;
        ++j;
      } else if (a < b) {
        ++i;
      } else {
        ++j;
      }
    }
    return s;
  }
};

// Row-major sparse matrix over a fixed feature dimension.
class SparseMatrix {
 public:
  std::uint32_t n_features = 0;
  // Fingerprint of the vocabulary that produced the matrix; empty for
  // hand-built matrices. Prediction rejects a mismatch with the model's.
  std::string fingerprint;
  // Test instrumentation: bumped on every row access when set.
  std::shared_ptr<std::atomic<std::uint64_t>> access_probe;

  SparseMatrix() = default;
  explicit SparseMatrix(std::uint32_t features) : n_features(features) {}

  std::size_t n_rows() const { return rows_.size(); }

  void reserve(std::size_t n) { rows_.reserve(n); }

  void add_row(SparseVector v) {
    for (const auto& e : v.entries) {
      if (e.index >= n_features) {
        raise(ErrorKind::Shape, "sparse entry index " + std::to_string(e.index) +
                                    " out of range for " +
                                    std::to_string(n_features) + " features");
      }
    }
    rows_.push_back(std::move(v));
  }

  // Preallocates n empty rows for parallel per-slot writes.
  void resize_rows(std::size_t n) { rows_.resize(n); }
  SparseVector& mutable_row(std::size_t i) { return rows_[i]; }

  const SparseVector& row(std::size_t i) const {
    if (access_probe) access_probe->fetch_add(1, std::memory_order_relaxed);
    return rows_[i];
  }

 private:
  std::vector<SparseVector> rows_;
};

}  // namespace kalkan
