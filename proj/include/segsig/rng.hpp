#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace segsig {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t avalanche(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Derives a child seed from a master seed and an ordered label path.
///
/// Each step is bijective in the incoming state for a fixed label and in the
/// label for a fixed state, so distinct label paths of equal length cannot
/// collide trivially. Pure integer arithmetic, identical on every platform.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::span<const std::uint64_t> labels) {
  std::uint64_t h = avalanche(master + kGoldenGamma);
  for (std::uint64_t v : labels) h = avalanche(h + kGoldenGamma + v);
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> labels) {
  return derive_seed(master, std::span<const std::uint64_t>(labels.begin(), labels.size()));
}

/// Seeded stream of uniform and gaussian variates.
///
/// uniform01() consumes exactly one engine word per call, so "n draws" is a
/// well-defined contract. gaussian() uses a Box-Muller pair with the second
/// value cached; the variate sequence is fully determined by the seed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// One draw in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal variate.
  double gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - uniform01();  // in (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    cached_ = r * std::sin(t);
    has_cached_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace segsig
