#pragma once

#include <cstdint>
#include <string_view>

namespace quorum {

// splitmix64 finalizer (Steele, Lea & Flood's SplittableRandom mixing step).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kSplitmixGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Deterministic sub-stream derivation. Stable across platforms and across
// reimplementations in other languages: pure 64-bit wrapping arithmetic.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64_mix((seed ^ 0x6A09E667F3BCC909ULL) +
                        kSplitmixGamma * splitmix64_mix(stream + kSplitmixGamma));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  return derive_seed(seed, fnv1a64(tag));
}

// Counter-based generator: output i is splitmix64_mix(seed + i * gamma),
// identical to the splitmix64 stream seeded with `seed`. Stateless apart from
// the counter, so any draw can be recomputed from (seed, index).
class CounterRng {
 public:
  static constexpr const char* kAlgorithmName = "splitmix64-counter";

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return splitmix64_mix(seed_ + kSplitmixGamma * ++counter_); }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n) via 128-bit multiply-shift; n must be nonzero.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace quorum
