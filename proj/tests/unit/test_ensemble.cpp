#include <gtest/gtest.h>

#include "rmteq/analytics.hpp"
#include "rmteq/ensemble.hpp"
#include "rmteq/errors.hpp"

using namespace rmteq;

namespace {
ExperimentConfig small_config(int workers) {
  ExperimentConfig cfg;
  cfg.sizes = {SizeSpec::from_spins(2), SizeSpec::from_spins(3), SizeSpec::from_spins(4)};
  cfg.samples_per_size = 12;
  cfg.master_seed = 2024;
  cfg.workers = workers;
  return cfg;
}
}  // namespace

TEST(SizeSpec, FromSpinsAndDim) {
  const SizeSpec s = SizeSpec::from_spins(5);
  EXPECT_EQ(s.n, 32u);
  EXPECT_EQ(s.num_spins, 5);
  EXPECT_DOUBLE_EQ(SizeSpec::from_dim(10).label(), std::log2(10.0));
  EXPECT_EQ(SizeSpec::from_dim(16).num_spins, 4);
}

TEST(SigmaRule, Values) {
  EXPECT_DOUBLE_EQ((SigmaRule{SigmaRuleKind::InverseSqrtN, 1.0}).sigma_for(16), 0.25);
  EXPECT_DOUBLE_EQ((SigmaRule{SigmaRuleKind::Fixed, 0.7}).sigma_for(16), 0.7);
}

TEST(GridRule, UsesPredictedTime) {
  const TimeGridSpec g = GridRule{}.for_size(8, 0.5);
  const double t = predicted_teq(8, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(g.dt, t / 64.0);
  EXPECT_DOUBLE_EQ(g.t_max, 40.0 * t);
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig cfg = small_config(1);
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.global_index(2, 5), 29u);
  cfg.samples_per_size = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = small_config(0);
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = small_config(1);
  cfg.sizes.clear();
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Ensemble, RecordsIndependentOfWorkerCount) {
  const EnsembleResult one = run_ensemble(small_config(1));
  const EnsembleResult four = run_ensemble(small_config(4));
  ASSERT_EQ(one.records.size(), 36u);
  EXPECT_EQ(one.records, four.records);
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    EXPECT_EQ(one.records[i].index, i);
    EXPECT_EQ(one.records[i].seed, derive_sample_seed(2024, i));
  }
}

TEST(Ensemble, SimulateSampleMatchesRun) {
  const ExperimentConfig cfg = small_config(1);
  const EnsembleResult res = run_ensemble(cfg);
  EXPECT_EQ(simulate_sample(cfg, 1, 7), res.records[cfg.global_index(1, 7)]);
}

TEST(Ensemble, SummaryCountsAndCnum) {
  const ExperimentConfig cfg = small_config(1);
  const EnsembleResult res = run_ensemble(cfg);
  ASSERT_EQ(res.summary.per_size.size(), 3u);
  for (const SizeSummary& s : res.summary.per_size) {
    EXPECT_EQ(s.samples, 12u);
    EXPECT_EQ(s.completed + s.censored + s.rejected, 12u);
    if (s.completed > 0) {
      EXPECT_DOUBLE_EQ(s.c_num, c_num(s.n, s.sigma, s.t_fc.mean));
    }
  }
  EXPECT_TRUE(res.summary.fit.has_value() == false || res.summary.fit->n_points() == 3u);
}

TEST(Ensemble, RecordsSatisfyEquilibriumBound) {
  const EnsembleResult res = run_ensemble(small_config(1));
  for (const SampleRecord& r : res.records) {
    EXPECT_LE(r.g2_inf, 1.0 / r.d_eff);
    EXPECT_EQ(r.censored, !r.t_fc.has_value() && !r.rejected_degenerate);
  }
}

TEST(Ensemble, CnumFormula) {
  EXPECT_NEAR(c_num(4, 0.5, 1.0), 2.0 * std::sqrt(2.0 * 0.25 * 5.0) / std::numbers::pi, 1e-15);
}

TEST(GapMoments, McSamplesAreReproducible) {
  const auto a = mc_gap_power_samples(4, 1.0, 50, 2, 9);
  const auto b = mc_gap_power_samples(4, 1.0, 50, 2, 9, 3);
  EXPECT_EQ(a, b);
  EXPECT_THROW(mc_gap_power_samples(4, 1.0, 50, 3, 9), InvalidArgument);
  EXPECT_THROW(mc_gap_moment(4, 1.0, 1, 2, 9), InvalidArgument);
}

TEST(GapMoments, SecondMomentNearClosedForm) {
  const MeanSe m = mc_gap_moment(4, 1.0, 4000, 2, 1);
  EXPECT_NEAR(m.mean, 10.0, 4.0 * m.se);
}

// Pair-averaged fourth moment is 10 sigma^4 N (N + 1) (60 at N = 2).
TEST(GapMoments, FourthMomentNearIndependentValue) {
  const MeanSe m2 = mc_gap_moment(2, 1.0, 20000, 4, 3);
  EXPECT_NEAR(m2.mean, 60.0, 4.0 * m2.se);
  const MeanSe m4 = mc_gap_moment(4, 1.0, 4000, 4, 3);
  EXPECT_NEAR(m4.mean, 200.0, 4.0 * m4.se);
}
