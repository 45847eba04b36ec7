#include "rmteq/dephasing.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "rmteq/errors.hpp"

namespace rmteq {

namespace {

constexpr double kImagResidueLimit = 1e-9;
constexpr double kCrossingRelTol = 1e-6;

double spectral_range(const Eigen::VectorXd& eigenvalues) {
  return eigenvalues.maxCoeff() - eigenvalues.minCoeff();
}

void require_nonzero_range(double delta_a, double scale) {
  if (!(delta_a > 1e-14 * std::max(1.0, scale))) {
    throw InvalidArgument("Observable: spectral range is zero (multiple of identity)");
  }
}

}  // namespace

Observable::Observable(const HermitianMatrix& a) : matrix_(a.matrix()), delta_a_(0.0) {
  const Eigen::VectorXd ev = eigenvalues(a);
  delta_a_ = spectral_range(ev);
  require_nonzero_range(delta_a_, ev.cwiseAbs().maxCoeff());
}

Observable Observable::diagonal(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw InvalidArgument("Observable: empty diagonal");
  const double range = spectral_range(values);
  require_nonzero_range(range, values.cwiseAbs().maxCoeff());
  Eigen::MatrixXcd m = values.cast<Complex>().asDiagonal();
  return Observable(std::move(m), values, range);
}

Eigen::MatrixXcd Observable::in_eigenbasis(const Eigen::MatrixXcd& v) const {
  if (diagonal_) {
    return v.adjoint() * (diagonal_->cast<Complex>().asDiagonal() * v);
  }
  return v.adjoint() * matrix_ * v;
}

Observable bulk_magnetisation(int num_spins) {
  if (num_spins < 1 || num_spins > 24) {
    throw InvalidArgument("bulk_magnetisation: number of spins must be in [1, 24]");
  }
  const std::uint32_t n = 1u << num_spins;
  Eigen::VectorXd diag(n);
  for (std::uint32_t b = 0; b < n; ++b) {
    const int ones = std::popcount(b);
    diag(b) = static_cast<double>((num_spins - ones) - ones);
  }
  return Observable::diagonal(diag);
}

InitialState initial_state(StateKind kind, const Spectrum& spectrum, RngStream& rng) {
  const auto n = static_cast<Eigen::Index>(spectrum.dim());
  const Eigen::MatrixXcd& v = spectrum.eigenvectors;
  if (kind == StateKind::BasisAllUp) {
    // c = V^H e_0 is the conjugated first row of V.
    return {v.row(0).adjoint(), kind};
  }
  Eigen::VectorXcd psi(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    psi(k) = Complex(re, im);
  }
  psi /= psi.norm();
  Eigen::VectorXcd c = v.adjoint() * psi;
  c /= c.norm();
  return {std::move(c), kind};
}

DephasingData dephasing_data(const Spectrum& spectrum, const Observable& obs,
                             const InitialState& state) {
  const auto n = static_cast<Eigen::Index>(spectrum.dim());
  if (static_cast<Eigen::Index>(obs.dim()) != n || state.coefficients.size() != n) {
    throw InvalidArgument("dephasing_data: dimension mismatch between spectrum (" +
                          std::to_string(n) + "), observable (" + std::to_string(obs.dim()) +
                          ") and state (" + std::to_string(state.coefficients.size()) + ")");
  }
  const double delta_a = obs.delta_a();
  if (!(delta_a > 0.0)) throw InvalidArgument("dephasing_data: observable range must be positive");

  const Eigen::MatrixXcd a_tilde = obs.in_eigenbasis(spectrum.eigenvectors);
  const Eigen::VectorXcd& c = state.coefficients;

  DephasingData out;
  out.energies = spectrum.energies;
  out.gaps = gaps(spectrum);
  out.delta_a = delta_a;
  out.nu = Eigen::MatrixXcd::Zero(n, n);
  out.q = Eigen::MatrixXd::Zero(n, n);

  double a_eq = 0.0;
  double ipr = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double p = std::norm(c(k));
    a_eq += p * a_tilde(k, k).real();
    ipr += p * p;
  }
  out.a_eq = a_eq;
  out.d_eff = 1.0 / ipr;

  double g2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      // nu_ij = conj(c_j) A~_ji c_i; its mirror is set to the exact conjugate.
      const Complex v = std::conj(c(j)) * a_tilde(j, i) * c(i) / delta_a;
      out.nu(i, j) = v;
      out.nu(j, i) = std::conj(v);
      g2 += 2.0 * std::norm(v);
    }
  }
  out.g2_inf = g2;
  if (g2 > 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i != j) out.q(i, j) = std::norm(out.nu(i, j)) / g2;
      }
    }
  }
  out.a_initial = (c.adjoint() * a_tilde * c)(0, 0).real();
  return out;
}

double gap_dispersion(const DephasingData& data) {
  if (!(data.g2_inf > 0.0)) {
    throw UndefinedDispersion("gap_dispersion: all off-diagonal amplitudes vanish");
  }
  const auto n = static_cast<Eigen::Index>(data.dim());
  double mean = 0.0;
  double second = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double g = data.gaps.gaps(i, j);
      mean += data.q(i, j) * g;
      second += data.q(i, j) * g * g;
    }
  }
  const double sigma_g = std::sqrt(second);
  if (std::abs(mean) > 1e-10 * std::max(1.0, sigma_g)) {
    throw NumericFailure("gap_dispersion: mean gap " + std::to_string(mean) +
                         " does not vanish; relevances are not symmetric");
  }
  return second;
}

double teq_estimate(double sigma_g_sq) {
  if (!(sigma_g_sq > 0.0)) throw InvalidArgument("teq_estimate: sigma_G^2 must be positive");
  return std::numbers::pi / (2.0 * std::sqrt(sigma_g_sq));
}

SignalEvaluator::SignalEvaluator(const DephasingData& data)
    : energies_(data.energies),
      nu_(data.nu),
      phase_(data.energies.size()),
      tmp_(data.energies.size()) {}

Complex SignalEvaluator::raw(double t) const {
  const Eigen::Index n = energies_.size();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double arg = energies_(k) * t;
    phase_(k) = Complex(std::cos(arg), std::sin(arg));  // conj(w_k)
  }
  tmp_.noalias() = nu_ * phase_;
  // sum_i w_i (nu conj(w))_i with w_i = conj(phase_i)
  return phase_.dot(tmp_);
}

double SignalEvaluator::operator()(double t) const {
  const Complex z = raw(t);
  if (std::abs(z.imag()) > kImagResidueLimit) {
    throw NumericFailure("time_signal: imaginary residue " + std::to_string(z.imag()) +
                         " at t = " + std::to_string(t));
  }
  return z.real();
}

SignalTrace time_signal(const DephasingData& data, std::span<const double> times) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 0.0 || (k > 0 && times[k] < times[k - 1])) {
      throw InvalidArgument("time_signal: times must be nonnegative and ascending");
    }
  }
  SignalEvaluator g(data);
  SignalTrace trace;
  trace.times.assign(times.begin(), times.end());
  trace.values.reserve(times.size());
  trace.sq_values.reserve(times.size());
  for (double t : times) {
    const double v = g(t);
    trace.values.push_back(v);
    trace.sq_values.push_back(v * v);
  }
  return trace;
}

std::vector<double> TimeGridSpec::times() const {
  if (!(dt > 0.0) || !(t_max >= 0.0)) {
    throw InvalidArgument("TimeGridSpec: dt must be positive and t_max nonnegative");
  }
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  std::vector<double> out(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) out[k] = static_cast<double>(k) * dt;
  return out;
}

TimeGridSpec TimeGridSpec::around(double t_pred, double dt_fraction, double t_max_factor) {
  if (!(t_pred > 0.0) || !(dt_fraction > 0.0) || !(t_max_factor > 0.0)) {
    throw InvalidArgument("TimeGridSpec: nonpositive grid parameter");
  }
  return {t_pred * dt_fraction, t_pred * t_max_factor};
}

namespace {

double bisect_crossing(const SignalEvaluator& g, double threshold, double lo, double hi) {
  // Invariant: |g(lo)|^2 > threshold, |g(hi)|^2 <= threshold.
  while (hi - lo > kCrossingRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    const double v = g(mid);
    if (v * v <= threshold) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

std::optional<double> first_crossing(const DephasingData& data, const TimeGridSpec& grid) {
  const std::vector<double> times = grid.times();
  SignalEvaluator g(data);
  const double threshold = data.g2_inf;
  double prev_t = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double v = g(times[k]);
    if (v * v <= threshold) {
      if (k == 0) return times[0];
      return bisect_crossing(g, threshold, prev_t, times[k]);
    }
    prev_t = times[k];
  }
  return std::nullopt;
}

std::optional<double> first_crossing(const DephasingData& data, const SignalTrace& trace) {
  const double threshold = data.g2_inf;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (trace.sq_values[k] <= threshold) {
      if (k == 0) return trace.times[0];
      SignalEvaluator g(data);
      return bisect_crossing(g, threshold, trace.times[k - 1], trace.times[k]);
    }
  }
  return std::nullopt;
}

double reimann_violation_fraction(const SignalTrace& trace, double d_eff) {
  if (!(d_eff >= 1.0)) throw InvalidArgument("reimann_violation_fraction: d_eff must be >= 1");
  if (trace.size() == 0) return 0.0;
  const double threshold = std::pow(d_eff, -1.0 / 3.0);
  std::size_t count = 0;
  for (double v : trace.values) {
    if (std::abs(v) >= threshold) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(trace.size());
}

double bound_crossing_fraction(const SignalTrace& trace, double d_eff) {
  if (!(d_eff >= 1.0)) throw InvalidArgument("bound_crossing_fraction: d_eff must be >= 1");
  if (trace.size() == 0) return 0.0;
  const double threshold = 1.0 / d_eff;
  std::size_t count = 0;
  for (double v : trace.sq_values) {
    if (v > threshold) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(trace.size());
}

double window_average_sq(const SignalTrace& trace) {
  if (trace.size() == 0) return 0.0;
  double s = 0.0;
  for (double v : trace.sq_values) s += v;
  return s / static_cast<double>(trace.size());
}

}  // namespace rmteq
