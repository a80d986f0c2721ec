#pragma once

#include <cstdint>
#include <cstddef>
#include <utility>
#include <vector>

namespace kalkan {

// splitmix64. Hand-rolled so shuffles, bootstraps and threshold draws are
// bit-identical on every platform; std::shuffle and the std distributions
// are implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, bound); bound >= 1
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

  // uniform in [0, 1), 53-bit resolution
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed (per tree, per label, per member kind).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 rng(seed ^ (0x632be59bd9b4e019ULL + stream * 0x9e3779b97f4a7c15ULL));
  return rng.next();
}

// In-place Fisher-Yates.
template <typename T>
void seeded_shuffle(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace kalkan
