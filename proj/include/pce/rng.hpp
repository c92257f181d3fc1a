#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace pce {

/// Counter-based SplitMix64 stream. The state advances by a fixed increment
/// and each output is a finalizer hash of the state, so draws are a pure
/// function of (seed, counter). Streams for related tasks are derived as
/// base_seed + stream_index; the finalizer decorrelates adjacent seeds.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw strictly inside (0, 1).
  double uniform01() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal via Box-Muller; consumes two uniforms per call.
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

/// Stream seed for a sub-stream of a base seed (documented convention:
/// base_seed + stream_index).
inline std::uint64_t derive_stream(std::uint64_t base_seed, std::uint64_t stream_index) {
  return base_seed + stream_index;
}

/// 64-bit mix used to derive per-run seeds from a base seed:
/// splitmix64 finalizer of base_seed + (run_index + 1) * 0x9E3779B97F4A7C15.
inline std::uint64_t mix_seed(std::uint64_t base_seed, std::uint64_t run_index) {
  std::uint64_t z = base_seed + (run_index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace pce
