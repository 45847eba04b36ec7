#include "rmteq/statistics.hpp"

#include <cmath>
#include <vector>

#include "rmteq/errors.hpp"
#include "rmteq/rng.hpp"

namespace rmteq {

MeanSe mean_se(std::span<const double> xs) {
  MeanSe out;
  out.count = xs.size();
  if (xs.empty()) return out;
  double s = 0.0;
  for (double x : xs) s += x;
  out.mean = s / static_cast<double>(xs.size());
  out.se = xs.size() > 1 ? std::sqrt(sample_variance(xs) / static_cast<double>(xs.size())) : 0.0;
  return out;
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(xs.size() - 1);
}

namespace {

double relative_variance(std::span<const double> xs) {
  const MeanSe m = mean_se(xs);
  if (m.mean == 0.0) throw NumericFailure("relative variance of a zero-mean sample");
  return sample_variance(xs) / (m.mean * m.mean);
}

}  // namespace

BootstrapEstimate bootstrap_relative_variance(std::span<const double> xs, int resamples,
                                              std::uint64_t seed) {
  if (xs.size() < 2) throw InvalidArgument("bootstrap_relative_variance: need >= 2 values");
  if (resamples < 2) throw InvalidArgument("bootstrap_relative_variance: need >= 2 resamples");
  BootstrapEstimate out;
  out.estimate = relative_variance(xs);
  out.resamples = resamples;
  RngStream rng(seed);
  std::vector<double> draw(xs.size());
  std::vector<double> stats(static_cast<std::size_t>(resamples));
  for (auto& st : stats) {
    for (auto& d : draw) d = xs[rng.next_u64() % xs.size()];
    st = relative_variance(draw);
  }
  out.se = std::sqrt(sample_variance(stats));
  return out;
}

}  // namespace rmteq
