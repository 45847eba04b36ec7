#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rmteq {

struct FitPoint {
  double x;  ///< usually L = log2 N
  double y;
};

/// Parameters of y = a exp(-b x) + c. The RMSE is recomputed from the input
/// points whenever a FitResult is built, so it always matches (a, b, c).
class FitResult {
 public:
  static FitResult from_parameters(std::span<const FitPoint> points, double a, double b, double c);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double rmse() const noexcept { return rmse_; }
  std::size_t n_points() const noexcept { return n_points_; }

  double operator()(double x) const;

 private:
  FitResult(double a, double b, double c, double rmse, std::size_t n)
      : a_(a), b_(b), c_(c), rmse_(rmse), n_points_(n) {}

  double a_, b_, c_, rmse_;
  std::size_t n_points_;
};

/// Root mean squared residual of y = a exp(-b x) + c over `points`.
double shifted_exponential_rmse(std::span<const FitPoint> points, double a, double b, double c);

/**
 * Least-squares fit of y = a exp(-b x) + c.
 *
 * For fixed b the model is linear in (a, c), so the residual is profiled
 * over b alone: a 200-point log-spaced scan of b in [1e-3, 10] picks the
 * bracket, then golden-section search refines it to relative width 1e-9.
 * Needs at least four points and two distinct x values.
 */
FitResult fit_shifted_exponential(std::span<const FitPoint> points);

}  // namespace rmteq
