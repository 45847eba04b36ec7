#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace rmteq {

/// Sample mean with its standard error s / sqrt(n) (s uses n - 1).
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

MeanSe mean_se(std::span<const double> xs);

/// Unbiased sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> xs);

struct BootstrapEstimate {
  double estimate = 0.0;  ///< statistic on the original sample
  double se = 0.0;        ///< standard deviation over resamples
  int resamples = 0;
};

/// Var(x) / mean(x)^2 with a nonparametric bootstrap standard error.
/// Resample indices are next_u64() % n from RngStream(seed).
BootstrapEstimate bootstrap_relative_variance(std::span<const double> xs, int resamples,
                                              std::uint64_t seed);

}  // namespace rmteq
