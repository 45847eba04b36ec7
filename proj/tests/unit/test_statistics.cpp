#include <gtest/gtest.h>

#include <cmath>

#include "rmteq/errors.hpp"
#include "rmteq/rng.hpp"
#include "rmteq/statistics.hpp"

using namespace rmteq;

TEST(MeanSe, KnownValues) {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const MeanSe m = mean_se(xs);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.se, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(m.count, 4u);
  EXPECT_NEAR(sample_variance(xs), 5.0 / 3.0, 1e-15);
}

TEST(MeanSe, SingleValueHasZeroError) {
  const std::vector<double> xs{7.0};
  EXPECT_EQ(mean_se(xs).se, 0.0);
}

TEST(Bootstrap, DeterministicAndCentred) {
  RngStream rng(1);
  std::vector<double> xs(500);
  for (auto& x : xs) x = 10.0 + rng.gaussian();
  const BootstrapEstimate a = bootstrap_relative_variance(xs, 200, 77);
  const BootstrapEstimate b = bootstrap_relative_variance(xs, 200, 77);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.se, b.se);
  EXPECT_EQ(a.resamples, 200);
  EXPECT_NEAR(a.estimate, 0.01, 0.002);
  EXPECT_GT(a.se, 0.0);
  EXPECT_LT(a.se, 0.002);
}

TEST(Bootstrap, RejectsTinySamples) {
  const std::vector<double> xs{1.0};
  EXPECT_THROW(bootstrap_relative_variance(xs, 10, 0), InvalidArgument);
}
