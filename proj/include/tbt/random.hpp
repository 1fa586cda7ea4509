#ifndef TBT_RANDOM_HPP
#define TBT_RANDOM_HPP

#include <cstdint>

namespace tbt {

/// xorshift64* generator (Vigna 2016: shifts 12/25/27, multiplier
/// 0x2545F4914F6CDD1D). The seed is passed through one splitmix64 step so
/// that 0 and small seeds give well-mixed, nonzero states.
///
/// Fixtures depend on this exact sequence; do not swap in a std engine.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed) : state_(splitmix64(seed)) {
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
  }

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::uint64_t state_;
};

}  // namespace tbt

#endif  // TBT_RANDOM_HPP
