#include "rmteq/fit.hpp"

#include <algorithm>
#include <cmath>

#include "rmteq/errors.hpp"

namespace rmteq {

namespace {

constexpr double kBMin = 1e-3;
constexpr double kBMax = 10.0;
constexpr int kScanPoints = 200;
constexpr double kGoldenTol = 1e-9;

struct Profile {
  double a = 0.0;
  double c = 0.0;
  double ssr = 0.0;
};

// Best (a, c) for a fixed decay rate b.
Profile profile(std::span<const FitPoint> pts, double b) {
  const auto n = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) {
    mx += std::exp(-b * p.x);
    my += p.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : pts) {
    const double dx = std::exp(-b * p.x) - mx;
    sxx += dx * dx;
    sxy += dx * (p.y - my);
  }
  Profile out;
  out.a = sxx > 0.0 ? sxy / sxx : 0.0;
  out.c = my - out.a * mx;
  for (const auto& p : pts) {
    const double r = p.y - (out.a * std::exp(-b * p.x) + out.c);
    out.ssr += r * r;
  }
  return out;
}

}  // namespace

double shifted_exponential_rmse(std::span<const FitPoint> points, double a, double b, double c) {
  if (points.empty()) return 0.0;
  double ss = 0.0;
  for (const auto& p : points) {
    const double r = p.y - (a * std::exp(-b * p.x) + c);
    ss += r * r;
  }
  return std::sqrt(ss / static_cast<double>(points.size()));
}

FitResult FitResult::from_parameters(std::span<const FitPoint> points, double a, double b,
                                     double c) {
  return FitResult(a, b, c, shifted_exponential_rmse(points, a, b, c), points.size());
}

double FitResult::operator()(double x) const { return a_ * std::exp(-b_ * x) + c_; }

FitResult fit_shifted_exponential(std::span<const FitPoint> points) {
  if (points.size() < 4) {
    throw InvalidArgument("fit_shifted_exponential: need at least 4 points");
  }
  const auto [lo_it, hi_it] = std::minmax_element(
      points.begin(), points.end(), [](const FitPoint& l, const FitPoint& r) { return l.x < r.x; });
  if (!(hi_it->x > lo_it->x)) {
    throw InvalidArgument("fit_shifted_exponential: all x values are equal");
  }
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidArgument("fit_shifted_exponential: non-finite input point");
    }
  }

  std::vector<double> grid(kScanPoints);
  const double log_lo = std::log(kBMin), log_hi = std::log(kBMax);
  std::size_t best = 0;
  double best_ssr = 0.0;
  for (int k = 0; k < kScanPoints; ++k) {
    grid[static_cast<std::size_t>(k)] =
        std::exp(log_lo + (log_hi - log_lo) * k / static_cast<double>(kScanPoints - 1));
    const double ssr = profile(points, grid[static_cast<std::size_t>(k)]).ssr;
    if (k == 0 || ssr < best_ssr) {
      best_ssr = ssr;
      best = static_cast<std::size_t>(k);
    }
  }

  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = profile(points, x1).ssr;
  double f2 = profile(points, x2).ssr;
  while (hi - lo > kGoldenTol * 0.5 * (lo + hi)) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = profile(points, x1).ssr;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = profile(points, x2).ssr;
    }
  }
  double b = 0.5 * (lo + hi);
  Profile pb = profile(points, b);
  // The scan optimum can beat the refined bracket only at the grid ends.
  if (best_ssr < pb.ssr) {
    b = grid[best];
    pb = profile(points, b);
  }
  return FitResult::from_parameters(points, pb.a, b, pb.c);
}

}  // namespace rmteq
