#include "rmteq/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "rmteq/errors.hpp"

namespace rmteq {

GapHistogramBuilder::GapHistogramBuilder(int bins, double lo, double hi)
    : lo_(lo), hi_(hi) {
  if (bins < 1) throw InvalidArgument("gap_histogram: bins must be >= 1");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument("gap_histogram: range must satisfy lo < hi");
  }
  counts_.assign(static_cast<std::size_t>(bins), 0);
}

void GapHistogramBuilder::add_value(double s) {
  if (!(s >= lo_ && s <= hi_)) {
    ++outside_;
    return;
  }
  const auto bins = counts_.size();
  auto idx = static_cast<std::size_t>((s - lo_) / (hi_ - lo_) * static_cast<double>(bins));
  idx = std::min(idx, bins - 1);
  ++counts_[idx];
}

void GapHistogramBuilder::add_spectrum(const Eigen::VectorXd& energies) {
  ++spectra_;
  const Eigen::Index n = energies.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) add_value(std::abs(energies(j) - energies(i)));
  }
}

Histogram GapHistogramBuilder::finish() const {
  Histogram h;
  const auto bins = counts_.size();
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    h.edges[i] = lo_ + (hi_ - lo_) * static_cast<double>(i) / static_cast<double>(bins);
  }
  h.edges.back() = hi_;
  for (auto c : counts_) h.total += c;
  h.outside = outside_;
  if (h.total == 0) throw InvalidArgument("gap_histogram: no gaps inside the histogram range");
  h.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    h.densities[i] = static_cast<double>(counts_[i]) / (static_cast<double>(h.total) * h.width(i));
  }
  return h;
}

Histogram gap_histogram(std::span<const Eigen::VectorXd> spectra, int bins,
                        std::optional<std::pair<double, double>> range) {
  if (spectra.empty()) throw InvalidArgument("gap_histogram: no spectra given");
  double lo = 0.0;
  double hi = 0.0;
  if (range) {
    std::tie(lo, hi) = *range;
  } else {
    for (const auto& e : spectra) {
      if (e.size() > 1) hi = std::max(hi, e.maxCoeff() - e.minCoeff());
    }
    if (!(hi > 0.0)) throw InvalidArgument("gap_histogram: spectra contain no nonzero gaps");
  }
  GapHistogramBuilder builder(bins, lo, hi);
  for (const auto& e : spectra) builder.add_spectrum(e);
  return builder.finish();
}

double l1_distance(const Histogram& p, const Histogram& q) {
  if (p.edges != q.edges) throw InvalidArgument("l1_distance: histograms use different bins");
  double d = 0.0;
  for (std::size_t i = 0; i < p.bins(); ++i) {
    d += std::abs(p.densities[i] - q.densities[i]) * p.width(i);
  }
  return d;
}

Modality unimodality(const Histogram& hist, int window) {
  if (window < 1) throw InvalidArgument("unimodality: window must be >= 1");
  const auto n = static_cast<std::ptrdiff_t>(hist.bins());
  const std::ptrdiff_t half = window / 2;
  std::vector<double> smooth(static_cast<std::size_t>(n), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::ptrdiff_t k = i - half; k <= i + half; ++k) {
      if (k >= 0 && k < n) s += hist.densities[static_cast<std::size_t>(k)];
    }
    smooth[static_cast<std::size_t>(i)] = s / static_cast<double>(window);
  }
  std::vector<double> runs;
  for (double v : smooth) {
    if (runs.empty() || runs.back() != v) runs.push_back(v);
  }
  Modality out;
  if (runs.empty() || (runs.size() == 1 && runs[0] == 0.0)) return out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const bool above_left = i == 0 || runs[i] > runs[i - 1];
    const bool above_right = i + 1 == runs.size() || runs[i] > runs[i + 1];
    if (above_left && above_right) ++out.n_modes;
  }
  out.is_unimodal = out.n_modes == 1;
  return out;
}

}  // namespace rmteq
