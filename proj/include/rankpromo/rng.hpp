#pragma once

#include <cstdint>
#include <random>

namespace rankpromo {

using Rng = std::mt19937_64;

/// Uniform double in [0,1). Hand-rolled so that streams are stable for a
/// given seed regardless of standard-library distribution internals.
inline double u01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound). bound must be positive.
inline long uniform_index(Rng& rng, long bound) {
  return static_cast<long>(rng() % static_cast<std::uint64_t>(bound));
}

/// In-place Fisher-Yates shuffle.
template <typename Vec>
void shuffle(Vec& v, Rng& rng) {
  for (long i = static_cast<long>(v.size()) - 1; i > 0; --i) {
    long j = uniform_index(rng, i + 1);
    std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
  }
}

}  // namespace rankpromo
