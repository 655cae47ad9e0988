#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace ghznet {

// Generator family identifier recorded in every serialized report.
inline constexpr std::string_view kRngFamily = "splitmix64-v1";

// SplitMix64 (Steele/Lea/Flood; Vigna's fixed-increment variant). A stream
// is a single 64-bit word, so Monte Carlo trials can derive independent
// streams from (seed, trial index) and results never depend on scheduling.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Fair coin, 0 or 1.
  int next_bit() noexcept { return static_cast<int>(next() >> 63); }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Derive the stream for one trial of a seeded experiment. Both words go
  // through the output mix so nearby (seed, stream) pairs land far apart.
  static SplitMix64 for_stream(std::uint64_t seed, std::uint64_t stream) noexcept {
    SplitMix64 a(seed);
    SplitMix64 b(stream ^ 0x5851F42D4C957F2DULL);
    return SplitMix64(a.next() ^ b.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace ghznet
