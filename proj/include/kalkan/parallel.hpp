#pragma once

#include <cstddef>

namespace kalkan {

// Data-parallel loop over [0, n). Call sites write only to slot i, so output
// is bit-identical for any thread count (no cross-thread float reductions).
template <typename Fn>
void parallel_for(std::ptrdiff_t n, Fn&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
#else
  for (std::ptrdiff_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
#endif
}

}  // namespace kalkan
