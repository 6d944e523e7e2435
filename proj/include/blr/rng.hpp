#pragma once
#include <cmath>
#include <cstdint>

namespace blr {

/// Identifier of the random stream recorded in reports, so a summary states
/// exactly which algorithm produced it.
inline constexpr const char* kRngAlgorithm = "splitmix64/u53/polar:v1";

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Seed of the `counter`-th substream of `seed`. Every bootstrap replicate
/// gets its own substream, so results do not depend on evaluation order.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t counter) {
  return detail::mix64(seed + 0x9e3779b97f4a7c15ULL * (counter + 1));
}

/// SplitMix64 generator with the derived draws the toolkit needs. Integer
/// bounding uses the 128-bit multiply-shift reduction and normals use
/// Marsaglia's polar method (sqrt/log only), keeping streams reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return detail::mix64(z);
  }

  /// Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Standard normal draw.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace blr
