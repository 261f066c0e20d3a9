#include "looptf/rng.hpp"

#include <cmath>
#include <numbers>

namespace looptf {

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), state_(seed) {}

std::uint64_t RandomSource::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RandomSource::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log never sees zero.
  const double u1 =
      static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace looptf
