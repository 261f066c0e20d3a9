#pragma once

#include <cstdint>

namespace looptf {

// Deterministic random source built on splitmix64.  The stream depends only
// on the seed, so results are identical across platforms and compilers
// (unlike std::mt19937 paired with std::normal_distribution, whose output is
// implementation-defined).
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Next raw 64-bit word of the stream.
  std::uint64_t next_u64();

  // Uniform double in [0, 1) with 53 bits of precision.
  double next_unit();

  // Standard normal via Box-Muller; generates pairs and caches the spare.
  double next_gaussian();

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace looptf
