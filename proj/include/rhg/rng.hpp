#pragma once

#include <cstdint>
#include <random>

namespace rhg {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; used to derive well-separated seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of stream `stream` under `master`. Depends only on the pair, so a
/// trial's randomness is independent of which worker runs it.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline Engine make_engine(std::uint64_t seed) { return Engine(splitmix64(seed)); }

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

}  // namespace rhg
