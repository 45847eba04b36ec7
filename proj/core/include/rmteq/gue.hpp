#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "rmteq/rng.hpp"

namespace rmteq {

using Complex = std::complex<double>;

/// Dense complex Hermitian matrix. Hermiticity is exact: the lower triangle
/// is the conjugate of the upper triangle and the diagonal is real.
class HermitianMatrix {
 public:
  /// Takes a matrix that must already be exactly Hermitian; throws
  /// InvalidArgument otherwise.
  explicit HermitianMatrix(Eigen::MatrixXcd m);

  /// Builds from the upper triangle of `m`. The lower triangle is ignored
  /// and the imaginary part of the diagonal is dropped.
  static HermitianMatrix from_upper(const Eigen::MatrixXcd& m);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  double trace() const noexcept { return m_.diagonal().real().sum(); }
  double frobenius_norm() const noexcept { return m_.norm(); }

 private:
  struct Unchecked {};
  HermitianMatrix(Eigen::MatrixXcd m, Unchecked) : m_(std::move(m)) {}

  Eigen::MatrixXcd m_;
};

/// Eigenpairs of a Hermitian matrix. Column k of `eigenvectors` belongs to
/// `energies[k]`; energies ascend.
struct Spectrum {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd eigenvectors;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(energies.size()); }
};

/// G(i, j) = E_j - E_i.
struct GapTable {
  Eigen::MatrixXd gaps;

  double operator()(std::size_t i, std::size_t j) const {
    return gaps(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(gaps.rows()); }
};

/**
 * Draws an N x N GUE matrix with density proportional to
 * exp(-Tr H^2 / 2 sigma^2).
 *
 * Diagonal entries have variance sigma^2; the real and imaginary parts of
 * each upper-triangle entry have variance sigma^2 / 2. Draw order is
 * row-major over the upper triangle: for each row i, first H_ii, then
 * (Re H_ij, Im H_ij) for j = i+1 .. N-1.
 */
HermitianMatrix sample_gue(std::size_t n, double sigma, RngStream& rng);

/// Full eigendecomposition (Eigen's self-adjoint solver: Householder
/// tridiagonalisation followed by implicit symmetric QR).
Spectrum eigendecompose(const HermitianMatrix& h);

/// Eigenvalues only, ascending. Cheaper than eigendecompose.
Eigen::VectorXd eigenvalues(const HermitianMatrix& h);

GapTable gaps(const Spectrum& spectrum);
GapTable gaps(const Eigen::VectorXd& energies);

/// Smallest |E_j - E_i| over i != j; +inf for a 1 x 1 spectrum.
double min_abs_gap(const Eigen::VectorXd& energies);

/// Exact-degeneracy screen used before first-crossing measurements.
inline bool is_degenerate(const Eigen::VectorXd& energies, double sigma) {
  return min_abs_gap(energies) < 1e-12 * sigma;
}

struct SpectrumResiduals {
  double unitarity_max;       ///< max |V^H V - I|
  double reconstruction_fro;  ///< ||H - V diag(E) V^H||_F
};

SpectrumResiduals spectrum_residuals(const HermitianMatrix& h, const Spectrum& s);

}  // namespace rmteq
