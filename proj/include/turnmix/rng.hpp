#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "turnmix/angles.hpp"

namespace turnmix {

// SplitMix64: used to expand seeds and derive independent substreams.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256** seeded via SplitMix64. Substreams for chains/players are
// derived from (seed, stream index) so results do not depend on thread
// scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    SplitMix64 sm(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
    for (auto& w : s_) w = sm.next();
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1]
  double uniform_pos() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller (second draw cached)
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double theta = kTwoPi * uniform();
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace turnmix
