#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rmteq/gue.hpp"
#include "rmteq/rng.hpp"

namespace rmteq {

/// Hermitian observable in the site basis together with its spectral range
/// delta_a = a_max - a_min.
class Observable {
 public:
  /// Throws InvalidArgument for a multiple of the identity (zero range).
  explicit Observable(const HermitianMatrix& a);

  /// Diagonal observable; cheaper to rotate into the energy basis.
  static Observable diagonal(const Eigen::VectorXd& values);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  double delta_a() const noexcept { return delta_a_; }
  bool is_diagonal() const noexcept { return diagonal_.has_value(); }

  /// V^H A V for the eigenvector matrix V.
  Eigen::MatrixXcd in_eigenbasis(const Eigen::MatrixXcd& v) const;

 private:
  Observable(Eigen::MatrixXcd m, std::optional<Eigen::VectorXd> diag, double delta_a)
      : matrix_(std::move(m)), diagonal_(std::move(diag)), delta_a_(delta_a) {}

  Eigen::MatrixXcd matrix_;
  std::optional<Eigen::VectorXd> diagonal_;
  double delta_a_;
};

/// Sum of sigma_z over L spins, in the computational basis of N = 2^L
/// states: entry b is (#zero bits of b) - (#one bits of b). delta_a = 2L.
Observable bulk_magnetisation(int num_spins);

enum class StateKind { BasisAllUp, HaarRandom };

/// Pure initial state written in the energy eigenbasis.
struct InitialState {
  Eigen::VectorXcd coefficients;
  StateKind kind;
};

/**
 * BasisAllUp rotates the site-basis state |0...0> into the eigenbasis
 * (c = V^H e_0) and draws nothing from `rng`. HaarRandom draws N complex
 * Gaussians (real part, then imaginary part, per component), normalises,
 * and rotates.
 */
InitialState initial_state(StateKind kind, const Spectrum& spectrum, RngStream& rng);

/// Everything needed for the dephasing picture of one (H, A, psi0) triple.
struct DephasingData {
  Eigen::VectorXd energies;
  GapTable gaps;
  Eigen::MatrixXcd nu;  ///< nu_ij = conj(c_j) A~_ji c_i / delta_a, nu_ii = 0
  Eigen::MatrixXd q;    ///< gap relevances |nu_ij|^2 / g2_inf (all zero if g2_inf == 0)
  double a_eq = 0.0;    ///< sum_k |c_k|^2 A~_kk
  double a_initial = 0.0;  ///< <psi0|A|psi0>
  double delta_a = 1.0;
  double g2_inf = 0.0;  ///< sum_{i != j} |nu_ij|^2, infinite-time average of |g|^2
  double d_eff = 1.0;   ///< 1 / sum_k |c_k|^4

  std::size_t dim() const noexcept { return static_cast<std::size_t>(energies.size()); }
};

DephasingData dephasing_data(const Spectrum& spectrum, const Observable& obs,
                             const InitialState& state);

/// sigma_G^2 = sum_{i != j} q_ij G_ij^2. Throws UndefinedDispersion when
/// every nu_ij vanishes and NumericFailure if the mean gap does not cancel.
double gap_dispersion(const DephasingData& data);

/// pi / (2 sqrt(sigma_g_sq)).
double teq_estimate(double sigma_g_sq);

struct SignalTrace {
  std::vector<double> times;
  std::vector<double> values;     ///< g(t)
  std::vector<double> sq_values;  ///< |g(t)|^2

  std::size_t size() const noexcept { return times.size(); }
};

/// Evaluates g(t) = sum_{i != j} nu_ij exp(i G_ij t) for one DephasingData.
/// The double sum is factored as w^T nu conj(w) with w_k = exp(-i E_k t),
/// which is O(N^2) per call.
class SignalEvaluator {
 public:
  explicit SignalEvaluator(const DephasingData& data);

  /// Raw complex sum; its imaginary part is rounding noise.
  Complex raw(double t) const;

  /// Real signal. Throws NumericFailure if |Im| > 1e-9.
  double operator()(double t) const;

 private:
  Eigen::VectorXd energies_;
  Eigen::MatrixXcd nu_;
  mutable Eigen::VectorXcd phase_;
  mutable Eigen::VectorXcd tmp_;
};

SignalTrace time_signal(const DephasingData& data, std::span<const double> times);

/// Uniform sampling grid t_k = k dt for k = 0 .. floor(t_max / dt).
struct TimeGridSpec {
  double dt = 0.0;
  double t_max = 0.0;

  std::vector<double> times() const;

  /// Default grid around a predicted equilibration time: dt = t_pred / 64,
  /// t_max = 40 t_pred.
  static TimeGridSpec around(double t_pred, double dt_fraction = 1.0 / 64.0,
                             double t_max_factor = 40.0);
};

/// First t with |g(t)|^2 <= g2_inf: scan the grid for the first node at or
/// below the threshold and bisect the bracketing interval to a relative
/// width of 1e-6. Returns nullopt if the grid ends first.
std::optional<double> first_crossing(const DephasingData& data, const TimeGridSpec& grid);

/// Same search, reusing a trace already sampled on a uniform grid.
std::optional<double> first_crossing(const DephasingData& data, const SignalTrace& trace);

/// Fraction of samples with |g| >= d_eff^(-1/3).
double reimann_violation_fraction(const SignalTrace& trace, double d_eff);

/// Fraction of samples with |g|^2 > 1 / d_eff.
double bound_crossing_fraction(const SignalTrace& trace, double d_eff);

/// Mean of |g|^2 over the trace (rectangle rule on the sample points).
double window_average_sq(const SignalTrace& trace);

}  // namespace rmteq
