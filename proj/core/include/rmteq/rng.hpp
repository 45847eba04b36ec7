#pragma once

#include <cstdint>
#include <optional>

namespace rmteq {

/// SplitMix64 output finalizer.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Seed for Monte Carlo sample `index` of a run seeded with `master_seed`:
/// splitmix64_mix(master_seed ^ (index + 1) * kGoldenGamma), with wrapping
/// 64-bit arithmetic.
constexpr std::uint64_t derive_sample_seed(std::uint64_t master_seed,
                                           std::uint64_t index) noexcept {
  return splitmix64_mix(master_seed ^ ((index + 1) * kGoldenGamma));
}

/**
 * Deterministic 64-bit random stream.
 *
 * The generator is SplitMix64: the state advances by kGoldenGamma and each
 * output is splitmix64_mix(state). Uniform doubles take the top 53 bits.
 * Gaussian variates use the Box-Muller transform on two consecutive
 * uniforms u1 in (0, 1], u2 in [0, 1):
 *
 *   r = sqrt(-2 ln u1),  z0 = r cos(2 pi u2),  z1 = r sin(2 pi u2)
 *
 * z0 is returned first and z1 is cached for the next call. A stream is
 * single-owner; never share one between threads.
 */
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += kGoldenGamma;
    return splitmix64_mix(state_);
  }

  /// Uniform in [0, 1).
  double uniform() noexcept;

  /// Standard normal variate (mean 0, variance 1).
  double gaussian() noexcept;

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

}  // namespace rmteq
