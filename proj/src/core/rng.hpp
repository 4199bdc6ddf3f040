#ifndef CCECR_CORE_RNG_HPP
#define CCECR_CORE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace ccecr {

// Deterministic, platform-stable random stream (splitmix64). All stochastic
// behavior in the toolkit goes through this type so that identical seeds give
// identical runs regardless of standard-library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [lo, hi], inclusive. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return lo + static_cast<std::int64_t>(next_u64());  // full 64-bit range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return lo + static_cast<std::int64_t>(v % span);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // Standard normal via Box-Muller; the second value of the pair is discarded
  // to keep the draw count predictable.
  double normal() {
    double u1 = u01();
    while (u1 <= 0.0) u1 = u01();
    const double u2 = u01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Normal with mean 1 and coefficient of variation cv, truncated at zero by
  // rejection. cv = 0 degenerates to the constant 1.
  double positive_noise(double cv) {
    if (cv <= 0.0) return 1.0;
    for (int i = 0; i < 256; ++i) {
      const double x = 1.0 + cv * normal();
      if (x > 0.0) return x;
    }
    return 0.0;  // cv so large that rejection failed; treat as mass at zero
  }

 private:
  std::uint64_t state_;
};

// Stable seed derivation for independent substreams (episode seeds, policy
// streams, per-row evaluation seeds, ...). The master is finalized before the
// stream is folded in, so nearby (master, stream) pairs cannot alias the way
// a plain xor-with-offset would.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  z += stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL;
  z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
  z = (z ^ (z >> 29)) * 0xc4ceb9fe1a85ec53ULL;
  return z ^ (z >> 32);
}

}  // namespace ccecr

#endif  // CCECR_CORE_RNG_HPP
