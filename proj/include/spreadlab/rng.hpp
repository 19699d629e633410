#pragma once

#include <cstdint>
#include <random>

namespace spreadlab {

// Stream roles keep the different random inputs of one replicate
// (population draw, schedule variates, target ranks, ...) independent.
enum class StreamRole : std::uint64_t {
  population = 1,
  schedule = 2,
  ranks = 3,
  thinning = 4,
  limits = 5,
  naive = 6,
  population_alt = 7,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic stream keyed by (master seed, replicate index, role).
inline std::mt19937_64 make_stream(std::uint64_t master_seed,
                                   std::uint64_t replicate,
                                   StreamRole role) {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ replicate);
  s = splitmix64(s ^ static_cast<std::uint64_t>(role));
  return std::mt19937_64(s);
}

}  // namespace spreadlab
