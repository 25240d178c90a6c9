#pragma once

#include <cstdint>
#include <random>

namespace spinlab {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used for counter-based seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for replicate `index` of stream `stream` under `master`. Pure function
/// of its arguments, so replicate seeds never depend on worker scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index = 0) {
  return mix64(mix64(master ^ mix64(stream + 0x5851f42d4c957f2dULL)) + index);
}

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

}  // namespace spinlab
