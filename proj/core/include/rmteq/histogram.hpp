#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rmteq {

/// Normalised histogram: sum of density * bin width is 1.
struct Histogram {
  std::vector<double> edges;      ///< bins + 1 ascending edges
  std::vector<double> densities;  ///< one per bin, nonnegative
  std::size_t total = 0;          ///< values that landed inside the range
  std::size_t outside = 0;        ///< values outside [edges.front(), edges.back()]

  std::size_t bins() const noexcept { return densities.size(); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

/// Streaming accumulator of all-pairs gaps s = |E_i - E_j|, i < j, into
/// equal-width bins over [lo, hi]. The right edge is inclusive.
class GapHistogramBuilder {
 public:
  GapHistogramBuilder(int bins, double lo, double hi);

  void add_spectrum(const Eigen::VectorXd& energies);
  void add_value(double s);

  std::size_t spectra() const noexcept { return spectra_; }

  /// Throws InvalidArgument if no value fell inside the range.
  Histogram finish() const;

 private:
  double lo_, hi_;
  std::vector<std::size_t> counts_;
  std::size_t outside_ = 0;
  std::size_t spectra_ = 0;
};

/// All-pairs gap histogram. Without an explicit range the bins span
/// [0, largest gap].
Histogram gap_histogram(std::span<const Eigen::VectorXd> spectra, int bins,
                        std::optional<std::pair<double, double>> range = std::nullopt);

/// Integral of |p - q| for two histograms sharing the same edges.
double l1_distance(const Histogram& p, const Histogram& q);

struct Modality {
  bool is_unimodal = false;
  int n_modes = 0;
};

/**
 * Smooths the densities with a centred moving average of `window` bins
 * (zero padded, always divided by `window`), collapses runs of equal
 * values, and counts runs strictly above both neighbours. A run at either
 * end only needs to beat its one neighbour. An all-zero histogram has no
 * modes.
 */
Modality unimodality(const Histogram& hist, int window);

}  // namespace rmteq
