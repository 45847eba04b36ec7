#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "rmteq/analytics.hpp"
#include "rmteq/errors.hpp"

namespace rmteq {

namespace {

constexpr int kMaxHermiteDegree = 512;

// pi_0 .. pi_{count-1} at x, without range checks.
void hermite_sweep(int count, double x, double sigma, double* out) {
  if (count <= 0) return;
  out[0] = std::pow(2.0 * std::numbers::pi, -0.25) / std::sqrt(sigma);
  if (count == 1) return;
  const double u = x / sigma;
  out[1] = u * out[0];
  for (int k = 1; k + 1 < count; ++k) {
    out[k + 1] = (u * out[k] - std::sqrt(static_cast<double>(k)) * out[k - 1]) /
                 std::sqrt(static_cast<double>(k + 1));
  }
}

// Values of pi_k at every node, one row per node.
Eigen::MatrixXd hermite_table(const GaussHermiteRule& rule, int count, double sigma) {
  const auto m = static_cast<Eigen::Index>(rule.nodes.size());
  Eigen::MatrixXd p(m, count);
  std::vector<double> row(static_cast<std::size_t>(count));
  for (Eigen::Index a = 0; a < m; ++a) {
    hermite_sweep(count, rule.nodes[static_cast<std::size_t>(a)], sigma, row.data());
    for (int k = 0; k < count; ++k) p(a, k) = row[static_cast<std::size_t>(k)];
  }
  return p;
}

}  // namespace

void hermite_pi_all(int count, double x, double sigma, std::span<double> out) {
  if (count < 0 || count - 1 > kMaxHermiteDegree) {
    throw InvalidArgument("hermite_pi: degree outside [0, 512]");
  }
  if (!(sigma > 0.0)) throw InvalidArgument("hermite_pi: sigma must be positive");
  if (out.size() < static_cast<std::size_t>(count)) {
    throw InvalidArgument("hermite_pi_all: output span too small");
  }
  hermite_sweep(count, x, sigma, out.data());
  for (int k = 0; k < count; ++k) {
    if (!std::isfinite(out[static_cast<std::size_t>(k)])) {
      throw NumericFailure("hermite_pi: non-finite value at degree " + std::to_string(k));
    }
  }
}

double hermite_pi(int k, double x, double sigma) {
  if (k < 0 || k > kMaxHermiteDegree) throw InvalidArgument("hermite_pi: degree outside [0, 512]");
  std::vector<double> buf(static_cast<std::size_t>(k + 1));
  hermite_pi_all(k + 1, x, sigma, buf);
  return buf.back();
}

GaussHermiteRule GaussHermiteRule::make(int order, double sigma) {
  if (order < 1 || order > kMaxHermiteDegree) {
    throw InvalidArgument("GaussHermiteRule: order outside [1, 512]");
  }
  if (!(sigma > 0.0)) throw InvalidArgument("GaussHermiteRule: sigma must be positive");

  // Nodes for the unit weight exp(-t^2/2): eigenvalues of the Jacobi matrix
  // with zero diagonal and off-diagonal sqrt(k).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(std::max(order - 1, 0));
  for (int k = 1; k < order; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericFailure("GaussHermiteRule: Jacobi eigenproblem did not converge");
  }

  GaussHermiteRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  std::vector<double> p(static_cast<std::size_t>(order + 1));
  for (int i = 0; i < order; ++i) {
    double t = solver.eigenvalues()(i);
    // Newton on the orthonormal polynomial of degree `order`;
    // its derivative is sqrt(order) times the degree order-1 member.
    for (int it = 0; it < 3; ++it) {
      hermite_sweep(order + 1, t, 1.0, p.data());
      const double f = p[static_cast<std::size_t>(order)];
      const double df = std::sqrt(static_cast<double>(order)) * p[static_cast<std::size_t>(order - 1)];
      if (df == 0.0) break;
      t -= f / df;
    }
    hermite_sweep(order, t, 1.0, p.data());
    double christoffel = 0.0;
    for (int k = 0; k < order; ++k) christoffel += p[static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(k)];
    rule.nodes[static_cast<std::size_t>(i)] = sigma * t;
    rule.weights[static_cast<std::size_t>(i)] = sigma / christoffel;
  }
  return rule;
}

KernelContext::KernelContext(int n_levels, double sigma, int quadrature_order)
    : n_(n_levels), sigma_(sigma), order_(quadrature_order) {
  if (n_levels < 1) throw InvalidArgument("KernelContext: N must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("KernelContext: sigma must be positive and finite");
  }
  if (quadrature_order < 2 * n_levels + 8) {
    throw InvalidArgument("KernelContext: quadrature order " + std::to_string(quadrature_order) +
                          " too low for N = " + std::to_string(n_levels) + " (need >= 2N + 8)");
  }
  if (quadrature_order > kMaxHermiteDegree) {
    throw InvalidArgument("KernelContext: quadrature order above 512");
  }
}

double kernel(const KernelContext& ctx, double x, double y) {
  const int n = ctx.n_levels();
  std::vector<double> px(static_cast<std::size_t>(n)), py(static_cast<std::size_t>(n));
  hermite_pi_all(n, x, ctx.sigma(), px);
  hermite_pi_all(n, y, ctx.sigma(), py);
  double s = 0.0;
  for (std::size_t j = 0; j < px.size(); ++j) s += px[j] * py[j];
  const double s2 = ctx.sigma() * ctx.sigma();
  return std::exp(-(x * x + y * y) / (4.0 * s2)) * s;
}

double joint_density(const KernelContext& ctx, double e1, double e2) {
  const int n = ctx.n_levels();
  if (n < 2) throw InvalidArgument("joint_density: N must be >= 2");
  const double k11 = kernel(ctx, e1, e1);
  const double k22 = kernel(ctx, e2, e2);
  const double k12 = kernel(ctx, e1, e2);
  return (k11 * k22 - k12 * k12) / (static_cast<double>(n) * (n - 1.0));
}

double quadrature_pair_moment(const KernelContext& ctx, int power) {
  const int n = ctx.n_levels();
  if (n < 2) throw InvalidArgument("quadrature_pair_moment: N must be >= 2");
  if (power < 0) throw InvalidArgument("quadrature_pair_moment: power must be >= 0");
  const GaussHermiteRule rule = GaussHermiteRule::make(ctx.quadrature_order(), ctx.sigma());
  const Eigen::MatrixXd p = hermite_table(rule, n, ctx.sigma());
  // With the Gaussian weight factored into the rule, the kernel reduces to
  // S = P P^T evaluated on the node grid.
  const Eigen::MatrixXd s = p * p.transpose();
  const auto m = static_cast<Eigen::Index>(rule.nodes.size());
  double total = 0.0;
  for (Eigen::Index a = 0; a < m; ++a) {
    const double xa = rule.nodes[static_cast<std::size_t>(a)];
    const double wa = rule.weights[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < m; ++b) {
      const double xb = rule.nodes[static_cast<std::size_t>(b)];
      const double wb = rule.weights[static_cast<std::size_t>(b)];
      const double det = s(a, a) * s(b, b) - s(a, b) * s(a, b);
      total += wa * wb * std::pow(xb - xa, power) * det;
    }
  }
  return total / (static_cast<double>(n) * (n - 1.0));
}

double quadrature_gap_dispersion(const KernelContext& ctx) {
  return quadrature_pair_moment(ctx, 2);
}

double quadrature_fourth_moment(const KernelContext& ctx) {
  const double n = ctx.n_levels();
  return n * (n - 1.0) * quadrature_pair_moment(ctx, 4);
}

double quadrature_kernel_trace(const KernelContext& ctx) {
  const GaussHermiteRule rule = GaussHermiteRule::make(ctx.quadrature_order(), ctx.sigma());
  const Eigen::MatrixXd p = hermite_table(rule, ctx.n_levels(), ctx.sigma());
  double total = 0.0;
  for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
    total += rule.weights[a] * p.row(static_cast<Eigen::Index>(a)).squaredNorm();
  }
  return total;
}

Eigen::MatrixXd hermite_gram(int count, double sigma, int quadrature_order) {
  if (count < 1) throw InvalidArgument("hermite_gram: count must be >= 1");
  const GaussHermiteRule rule = GaussHermiteRule::make(quadrature_order, sigma);
  const Eigen::MatrixXd p = hermite_table(rule, count, sigma);
  Eigen::VectorXd w(static_cast<Eigen::Index>(rule.weights.size()));
  for (std::size_t a = 0; a < rule.weights.size(); ++a) w(static_cast<Eigen::Index>(a)) = rule.weights[a];
  return p.transpose() * w.asDiagonal() * p;
}

}  // namespace rmteq
