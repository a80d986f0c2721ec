#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "kalkan/sparse.hpp"

namespace testutil {

inline kalkan::SparseVector row(
    std::initializer_list<std::pair<std::uint32_t, double>> entries) {
  kalkan::SparseVector v;
  for (const auto& [index, value] : entries) v.entries.push_back({index, value});
  return v;
}

// Materializes the nonzeros of a dense row-major table.
inline kalkan::SparseMatrix matrix(
    const std::vector<std::vector<double>>& dense) {
  const std::uint32_t n_features =
      dense.empty() ? 0 : static_cast<std::uint32_t>(dense[0].size());
  kalkan::SparseMatrix x(n_features);
  for (const auto& values : dense) {
    kalkan::SparseVector v;
    for (std::uint32_t j = 0; j < values.size(); ++j) {
      if (values[j] != 0.0) v.entries.push_back({j, values[j]});
    }
    x.add_row(std::move(v));
  }
  return x;
}

inline std::vector<std::uint8_t> labels(std::initializer_list<int> values) {
  std::vector<std::uint8_t> y;
  for (int v : values) y.push_back(static_cast<std::uint8_t>(v));
  return y;
}

// Root of the source tree for bundled assets and data files.
inline std::string source_root() {
#ifdef KALKAN_SOURCE_ROOT
  return KALKAN_SOURCE_ROOT;
#else
  return ".";
#endif
}

}  // namespace testutil
