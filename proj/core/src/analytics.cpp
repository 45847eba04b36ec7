#include "rmteq/analytics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rmteq/errors.hpp"

namespace rmteq {

namespace {

void require_levels(int n, const char* who) {
  if (n < 2) throw InvalidArgument(std::string(who) + ": N must be >= 2");
}

void require_sigma(double sigma, const char* who) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument(std::string(who) + ": sigma must be positive and finite");
  }
}

}  // namespace

double predicted_gap_dispersion(int n, double sigma) {
  require_levels(n, "predicted_gap_dispersion");
  require_sigma(sigma, "predicted_gap_dispersion");
  return 2.0 * sigma * sigma * (n + 1.0);
}

double predicted_teq(int n, double sigma, double c) {
  require_levels(n, "predicted_teq");
  require_sigma(sigma, "predicted_teq");
  if (!(c > 0.0)) throw InvalidArgument("predicted_teq: c must be positive");
  return (c / (2.0 * sigma)) * std::numbers::pi / std::sqrt(2.0 * (n + 1.0));
}

double delta_correction(double mean, double variance) {
  if (!(mean > 0.0)) throw InvalidArgument("delta_correction: mean must be positive");
  if (variance < 0.0) throw InvalidArgument("delta_correction: variance must be nonnegative");
  return 1.0 + 0.375 * variance / (mean * mean);
}

double variance_ratio_bound(int n) {
  require_levels(n, "variance_ratio_bound");
  return (n - 1.0) / (n + 1.0);
}

double predicted_fourth_moment(int n, double sigma) {
  require_levels(n, "predicted_fourth_moment");
  require_sigma(sigma, "predicted_fourth_moment");
  const double s2 = sigma * sigma;
  return 8.0 * s2 * s2 * n * (n + 1.0);
}

double c_analytic(int n) { return delta_correction(1.0, variance_ratio_bound(n)); }

std::vector<Prediction> predictions(int n, double sigma) {
  std::vector<Prediction> out{
      {PredictionKind::GapDispersion, predicted_gap_dispersion(n, sigma), n, sigma},
      {PredictionKind::FourthMoment, predicted_fourth_moment(n, sigma), n, sigma},
      {PredictionKind::VarianceRatioBound, variance_ratio_bound(n), n, sigma},
      {PredictionKind::CAnalytic, c_analytic(n), n, sigma},
      {PredictionKind::TeqGue, predicted_teq(n, sigma, 1.0), n, sigma},
  };
  for (const auto& p : out) {
    if (!std::isfinite(p.value)) throw NumericFailure("predictions: non-finite value");
  }
  return out;
}

}  // namespace rmteq
