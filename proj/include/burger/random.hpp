#pragma once

#include <cstdint>
#include <random>

namespace burger {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; turns (seed, stream) into an independent seed so
/// sub-procedures never share an engine.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform integer in [0, n). n must be positive.
template <typename Int>
Int uniform_index(Rng& rng, Int n) {
  return std::uniform_int_distribution<Int>(0, n - 1)(rng);
}

}  // namespace burger
