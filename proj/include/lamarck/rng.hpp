#pragma once

#include <cstdint>
#include <random>

namespace lamarck {

using Rng = std::mt19937_64;

/// Purpose tags for independent random streams derived from one master seed.
enum class StreamTag : std::uint64_t {
  Init = 1,
  Reproduce = 2,
  Learn = 3,
  Select = 4,
  Terrain = 5,
  Analysis = 6,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Seed for the stream identified by (master, tag, index). Streams for
/// distinct (tag, index) pairs are statistically independent and do not
/// depend on the order in which they are requested.
inline std::uint64_t derive_seed(std::uint64_t master, StreamTag tag, std::uint64_t index = 0) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
  return splitmix64(h ^ (index * 0xd1342543de82ef95ull));
}

inline Rng make_stream(std::uint64_t master, StreamTag tag, std::uint64_t index = 0) {
  return Rng{derive_seed(master, tag, index)};
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

/// Uniform integer in [lo, hi].
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace lamarck
