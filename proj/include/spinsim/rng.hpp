#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace spinsim::rng {

namespace detail {
inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based random stream (SplitMix64 core). Every (seed, shot, step)
/// triple opens an independent, reproducible stream, so results do not depend
/// on how shots are spread over worker threads. Distribution transforms are
/// spelled out here (not std::<distribution>) to keep byte-identical output
/// across standard libraries.
class Stream {
 public:
  explicit Stream(std::uint64_t seed, std::uint64_t shot = 0, std::uint64_t step = 0) {
    std::uint64_t key = detail::mix64(seed + detail::kGamma);
    key = detail::mix64(key ^ (shot + 0xD1B54A32D192ED03ull));
    key = detail::mix64(key ^ (step + 0x8CB92BA72F3D8DD7ull));
    state_ = key;
  }

  std::uint64_t next_u64() {
    state_ += detail::kGamma;
    return detail::mix64(state_);
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1), safe as a log() argument.
  double uniform_open() { return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Exponential waiting time with the given rate [1/s].
  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  /// Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double r = std::sqrt(-2.0 * std::log(uniform_open()));
    double theta = 2.0 * std::numbers::pi * uniform();
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

 private:
  std::uint64_t state_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace spinsim::rng
