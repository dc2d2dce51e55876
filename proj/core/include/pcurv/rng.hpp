#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pcurv {

// Counter-based generator: the i-th draw of stream s under seed k is
// splitmix64(k, s, i). Any draw can be reproduced without replaying the
// preceding ones, and independent streams are split off by stream id.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t bits_at(std::uint64_t counter) const {
    return mix(mix(mix(seed_) ^ stream_) + counter);
  }

  std::uint64_t next_bits() { return bits_at(counter_++); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; consumes two draws.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  CounterRng split(std::uint64_t stream) const { return CounterRng(mix(seed_ ^ stream_), stream); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace pcurv
