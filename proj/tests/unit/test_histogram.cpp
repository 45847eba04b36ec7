#include <gtest/gtest.h>

#include "rmteq/errors.hpp"
#include "rmteq/gue.hpp"
#include "rmteq/histogram.hpp"

using namespace rmteq;

TEST(Histogram, DensityIntegratesToOne) {
  GapHistogramBuilder b(4, 0.0, 4.0);
  for (double s : {0.5, 1.5, 1.6, 3.9, 5.0}) b.add_value(s);
  const Histogram h = b.finish();
  EXPECT_EQ(h.bins(), 4u);
  EXPECT_EQ(h.outside, 1u);
  double integral = 0.0;
  for (std::size_t i = 0; i < h.bins(); ++i) integral += h.densities[i] * h.width(i);
  EXPECT_NEAR(integral, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(h.densities[1], 0.5);
}

TEST(Histogram, SpectrumAddsAllPairs) {
  Eigen::VectorXd e(3);
  e << 0.0, 1.0, 3.0;
  GapHistogramBuilder b(3, 0.0, 3.0);
  b.add_spectrum(e);
  const Histogram h = b.finish();
  EXPECT_EQ(h.total, 3u);
  EXPECT_EQ(b.spectra(), 1u);
}

TEST(Histogram, EmptyThrows) {
  GapHistogramBuilder b(3, 0.0, 1.0);
  b.add_value(5.0);
  EXPECT_THROW(b.finish(), InvalidArgument);
  EXPECT_THROW(GapHistogramBuilder(0, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(GapHistogramBuilder(3, 1.0, 1.0), InvalidArgument);
}

TEST(Histogram, L1Distance) {
  GapHistogramBuilder a(2, 0.0, 2.0), b(2, 0.0, 2.0), c(3, 0.0, 2.0);
  a.add_value(0.5);
  b.add_value(1.5);
  c.add_value(0.5);
  EXPECT_DOUBLE_EQ(l1_distance(a.finish(), a.finish()), 0.0);
  EXPECT_DOUBLE_EQ(l1_distance(a.finish(), b.finish()), 2.0);
  EXPECT_THROW(l1_distance(a.finish(), c.finish()), InvalidArgument);
}

namespace {
Histogram from_densities(std::vector<double> d) {
  Histogram h;
  for (std::size_t i = 0; i <= d.size(); ++i) h.edges.push_back(double(i));
  h.densities = std::move(d);
  return h;
}
}  // namespace

TEST(Unimodality, CountsModes) {
  EXPECT_TRUE(unimodality(from_densities({0, 1, 3, 5, 3, 1, 0}), 1).is_unimodal);
  EXPECT_EQ(unimodality(from_densities({0, 4, 0, 0, 0, 4, 0}), 1).n_modes, 2);
  EXPECT_EQ(unimodality(from_densities({0, 4, 1, 4, 0}), 1).n_modes, 2);
  EXPECT_EQ(unimodality(from_densities({0, 2, 2, 2, 0}), 1).n_modes, 1);
  EXPECT_EQ(unimodality(from_densities({5, 4, 3, 2, 1}), 1).n_modes, 1);
}

TEST(Unimodality, SmoothingRemovesNoise) {
  const Histogram h = from_densities({0, 1, 3, 2.9, 5, 4.9, 6, 5, 3, 2, 1, 0});
  EXPECT_GT(unimodality(h, 1).n_modes, 1);
  EXPECT_TRUE(unimodality(h, 5).is_unimodal);
}

TEST(GapHistogram, GueGapsAreUnimodal) {
  RngStream rng(4);
  std::vector<Eigen::VectorXd> spectra;
  for (int k = 0; k < 2000; ++k) spectra.push_back(eigenvalues(sample_gue(6, 1.0 / std::sqrt(6.0), rng)));
  const Histogram h = gap_histogram(spectra, 30);
  EXPECT_EQ(h.total, 2000u * 15u);
  EXPECT_TRUE(unimodality(h, 5).is_unimodal);
}
