#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rmteq {

// Closed-form ensemble predictions for GUE(N, sigma).

/// <sigma_G^2>_GUE = 2 sigma^2 (N + 1). Requires N >= 2.
double predicted_gap_dispersion(int n, double sigma);

/// Average equilibration time (c / 2 sigma) * pi / sqrt(2 (N + 1)).
double predicted_teq(int n, double sigma, double c);

/// Second-order delta-method factor 1 + (3/8) variance / mean^2.
double delta_correction(double mean, double variance);

/// Upper bound (N - 1) / (N + 1) on Var(sigma_G^2) / <sigma_G^2>^2.
double variance_ratio_bound(int n);

/// 8 sigma^4 N (N + 1), the closed form quoted for the ensemble fourth
/// moment of the gaps.
double predicted_fourth_moment(int n, double sigma);

/// Bound-based proportionality constant 1 + (3/8) (N - 1)/(N + 1).
double c_analytic(int n);

inline constexpr double kCAnalyticLimit = 1.375;

enum class PredictionKind { GapDispersion, FourthMoment, VarianceRatioBound, CAnalytic, TeqGue };

struct Prediction {
  PredictionKind name;
  double value;
  int n;
  double sigma;
};

/// Validated bundle of predictions for one (N, sigma); TeqGue uses c = 1.
std::vector<Prediction> predictions(int n, double sigma);

// Hermite functions and the GUE two-point kernel.

/**
 * Orthonormal Hermite polynomial
 *
 *   pi_k(x) = H_k(x / (sqrt(2) sigma)) / sqrt(sqrt(2 pi) 2^k k! sigma)
 *
 * with respect to the weight exp(-x^2 / 2 sigma^2), evaluated through
 *
 *   pi_0 = (2 pi)^(-1/4) sigma^(-1/2),
 *   pi_{k+1} = (x pi_k / sigma - sqrt(k) pi_{k-1}) / sqrt(k + 1).
 *
 * Valid for k <= 512.
 */
double hermite_pi(int k, double x, double sigma);

/// pi_0(x) .. pi_{count-1}(x) written into `out` (size >= count).
void hermite_pi_all(int count, double x, double sigma, std::span<double> out);

/// Gauss rule for integrals of f(x) exp(-x^2 / 2 sigma^2) over the real line.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Golub-Welsch on the Jacobi matrix of the probabilists' Hermite
  /// polynomials, Newton-polished, weights from the Christoffel function.
  static GaussHermiteRule make(int order, double sigma);
};

/// N levels at standard deviation sigma, integrated with `quadrature_order`
/// Gauss-Hermite nodes per axis. The order must be at least 2N + 8.
class KernelContext {
 public:
  KernelContext(int n_levels, double sigma, int quadrature_order);
  KernelContext(int n_levels, double sigma)
      : KernelContext(n_levels, sigma, default_order(n_levels)) {}

  static int default_order(int n_levels) { return 2 * n_levels + 16; }

  int n_levels() const noexcept { return n_; }
  double sigma() const noexcept { return sigma_; }
  int quadrature_order() const noexcept { return order_; }

 private:
  int n_;
  double sigma_;
  int order_;
};

/// K_N(x, y) = exp(-(x^2 + y^2) / 4 sigma^2) sum_{j<N} pi_j(x) pi_j(y).
double kernel(const KernelContext& ctx, double x, double y);

/// Two-level marginal of the GUE eigenvalue density, normalised to 1:
/// [K(x,x) K(y,y) - K(x,y)^2] / (N (N - 1)).
double joint_density(const KernelContext& ctx, double e1, double e2);

/// Integral of (e2 - e1)^2 against joint_density. Equals <sigma_G^2> for
/// uniform relevances.
double quadrature_gap_dispersion(const KernelContext& ctx);

/// N (N - 1) times the integral of (e2 - e1)^4 against joint_density, i.e.
/// the ensemble mean of sum_{i != j} G_ij^4.
double quadrature_fourth_moment(const KernelContext& ctx);

/// Integral of (e2 - e1)^p against joint_density for even or odd p >= 0.
double quadrature_pair_moment(const KernelContext& ctx, int power);

/// Integral of K_N(x, x); equals N.
double quadrature_kernel_trace(const KernelContext& ctx);

/// Gram matrix of pi_0 .. pi_{count-1} under the Gaussian weight; identity
/// in exact arithmetic.
Eigen::MatrixXd hermite_gram(int count, double sigma, int quadrature_order);

}  // namespace rmteq
