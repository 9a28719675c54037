#pragma once

// Deterministic counter-based randomness. Every random draw in the engine is
// a pure function of (seed, counter), so identical commands reproduce
// identical bytes on every platform. The mixer is SplitMix64 (Steele,
// Lea & Flood), a fixed-point-free permutation of 64-bit words.

#include <cstdint>

namespace selfsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// One 64-bit word for a (seed, counter) pair; counters may be vertex ids,
// trial indices, or any other stable enumeration.
inline std::uint64_t keyed_u64(std::uint64_t seed, std::uint64_t counter) {
  return splitmix64(splitmix64(seed) ^ splitmix64(counter * 0xD1342543DE82EF95ULL + 1));
}

// Sequential generator for places that need a stream of words.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }
  // Uniform draw from [0, n) by rejection-free multiply-shift (n < 2^32 in
  // all engine uses; bias is < 2^-32 and irrelevant for test-data shaping).
  std::uint64_t below(std::uint64_t n) { return (static_cast<unsigned __int128>(next()) * n) >> 64; }
  long range(long lo, long hi) {  // inclusive ends
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

}  // namespace selfsim
