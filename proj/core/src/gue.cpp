#include "rmteq/gue.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rmteq/errors.hpp"

namespace rmteq {

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw InvalidArgument("HermitianMatrix: matrix must be square and non-empty");
  }
  const Eigen::Index n = m_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (m_(i, i).imag() != 0.0) {
      throw InvalidArgument("HermitianMatrix: diagonal entry " + std::to_string(i) +
                            " has nonzero imaginary part");
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (m_(j, i) != std::conj(m_(i, j))) {
        throw InvalidArgument("HermitianMatrix: entry (" + std::to_string(j) + "," +
                              std::to_string(i) + ") is not the conjugate of (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

HermitianMatrix HermitianMatrix::from_upper(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidArgument("HermitianMatrix: matrix must be square and non-empty");
  }
  const Eigen::Index n = m.rows();
  Eigen::MatrixXcd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = Complex(m(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      h(i, j) = m(i, j);
      h(j, i) = std::conj(m(i, j));
    }
  }
  return HermitianMatrix(std::move(h), Unchecked{});
}

HermitianMatrix sample_gue(std::size_t n, double sigma, RngStream& rng) {
  if (n == 0) throw InvalidArgument("sample_gue: N must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("sample_gue: sigma must be positive and finite");
  }
  const auto dim = static_cast<Eigen::Index>(n);
  const double off_sd = sigma / std::sqrt(2.0);
  Eigen::MatrixXcd upper = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    upper(i, i) = Complex(sigma * rng.gaussian(), 0.0);
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const double re = off_sd * rng.gaussian();
      const double im = off_sd * rng.gaussian();
      upper(i, j) = Complex(re, im);
    }
  }
  return HermitianMatrix::from_upper(upper);
}

Spectrum eigendecompose(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericFailure("eigendecompose: QR iteration did not converge within " +
                         std::to_string(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>::m_maxIterations) +
                         " sweeps per eigenvalue");
  }
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::VectorXd eigenvalues(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericFailure("eigenvalues: QR iteration did not converge");
  }
  return solver.eigenvalues();
}

GapTable gaps(const Eigen::VectorXd& energies) {
  const Eigen::Index n = energies.size();
  GapTable table{Eigen::MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      table.gaps(i, j) = energies(j) - energies(i);
    }
  }
  return table;
}

GapTable gaps(const Spectrum& spectrum) { return gaps(spectrum.energies); }

double min_abs_gap(const Eigen::VectorXd& energies) {
  double best = std::numeric_limits<double>::infinity();
  const Eigen::Index n = energies.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      best = std::min(best, std::abs(energies(j) - energies(i)));
    }
  }
  return best;
}

SpectrumResiduals spectrum_residuals(const HermitianMatrix& h, const Spectrum& s) {
  const auto n = static_cast<Eigen::Index>(s.dim());
  const Eigen::MatrixXcd& v = s.eigenvectors;
  const Eigen::MatrixXcd gram = v.adjoint() * v - Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd rebuilt = v * s.energies.cast<Complex>().asDiagonal() * v.adjoint();
  return {gram.cwiseAbs().maxCoeff(), (h.matrix() - rebuilt).norm()};
}

}  // namespace rmteq
