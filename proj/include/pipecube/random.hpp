#pragma once

#include <cstdint>
#include <random>

#include "pipecube/cube.hpp"

namespace pipecube {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Unbiased draw from [0, n). Avoids std::uniform_int_distribution so that
/// streams are identical across standard libraries.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = Rng::max() - Rng::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

/// Uniform in [0, 1).
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform over canonical states: the seven free cubies are shuffled into the
/// seven free slots and six twists are drawn, the seventh fixed by parity.
cube::CubeState random_canonical_state(Rng& rng);

/// Uniform over all 8! * 3^7 states (DBL anywhere).
cube::CubeState random_state(Rng& rng);

}  // namespace pipecube
