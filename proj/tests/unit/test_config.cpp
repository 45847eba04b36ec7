#include <gtest/gtest.h>

#include "rmteq/errors.hpp"
#include "rmteq/io/config.hpp"

using namespace rmteq;
using namespace rmteq::io;

TEST(Config, Defaults) {
  const RunConfig c = parse_config_text("", "empty");
  ASSERT_EQ(c.experiment.sizes.size(), 7u);
  EXPECT_EQ(c.experiment.sizes.front().n, 4u);
  EXPECT_EQ(c.experiment.sizes.back().n, 256u);
  EXPECT_EQ(c.experiment.samples_per_size, 200);
  EXPECT_EQ(c.experiment.state_kind, StateKind::HaarRandom);
  EXPECT_EQ(c.experiment.sigma_rule.kind, SigmaRuleKind::InverseSqrtN);
  EXPECT_EQ(c.experiment.master_seed, 0u);
  EXPECT_EQ(c.experiment.workers, 1);
  EXPECT_EQ(c.histogram_bins, 40);
}

TEST(Config, ParsesAllKeys) {
  const RunConfig c = parse_config_text(R"(# comment
sizes = [3, 5]   # trailing comment
sigma_rule = "fixed"
sigma = 0.5
samples_per_size = 17
state_kind = 'basis_all_up'
grid_dt_fraction = 0.01
grid_t_max_factor = 12.5
master_seed = 18446744073709551615
workers = 4
sample_index = 3
histogram_bins = 25
artifact_version = "x"
)", "inline");
  ASSERT_EQ(c.experiment.sizes.size(), 2u);
  EXPECT_EQ(c.experiment.sizes[1].n, 32u);
  EXPECT_EQ(c.experiment.sigma_rule.kind, SigmaRuleKind::Fixed);
  EXPECT_DOUBLE_EQ(c.experiment.sigma_rule.value, 0.5);
  EXPECT_EQ(c.experiment.samples_per_size, 17);
  EXPECT_EQ(c.experiment.state_kind, StateKind::BasisAllUp);
  EXPECT_DOUBLE_EQ(c.experiment.grid.dt_fraction, 0.01);
  EXPECT_DOUBLE_EQ(c.experiment.grid.t_max_factor, 12.5);
  EXPECT_EQ(c.experiment.master_seed, 18446744073709551615ULL);
  EXPECT_EQ(c.experiment.workers, 4);
  EXPECT_EQ(c.sample_index, 3u);
  EXPECT_EQ(c.histogram_bins, 25);
}

TEST(Config, OverridesApplyAfterFile) {
  const std::vector<std::string> ov{"samples_per_size=5", "dims = [6, 10]"};
  const RunConfig c = parse_config_text("samples_per_size = 100\n", "f", ov);
  EXPECT_EQ(c.experiment.samples_per_size, 5);
  ASSERT_EQ(c.experiment.sizes.size(), 2u);
  EXPECT_EQ(c.experiment.sizes[1].n, 10u);
  EXPECT_FALSE(c.experiment.sizes[1].num_spins);
}

TEST(Config, ErrorsCarryLocation) {
  try {
    parse_config_text("workers = 2\nbogus = 1\n", "cfg.toml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cfg.toml:2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
  EXPECT_THROW(parse_config_text("workers = 0\n", "f"), ConfigError);
  EXPECT_THROW(parse_config_text("sizes = [1]\n", "f"), ConfigError);
  EXPECT_THROW(parse_config_text("sizes = [2]\ndims = [4]\n", "f"), ConfigError);
  EXPECT_THROW(parse_config_text("sigma_rule = \"other\"\n", "f"), ConfigError);
  EXPECT_THROW(parse_config_text("master_seed = -1\n", "f"), ConfigError);
  EXPECT_THROW(parse_config_text("samples_per_size = 2.5\n", "f"), ConfigError);
  EXPECT_THROW(parse_config_text("[table]\n", "f"), ConfigError);
  const std::vector<std::string> bad{"novalue"};
  EXPECT_THROW(parse_config_text("", "f", bad), ConfigError);
}

TEST(Config, MissingFileIsIoError) {
  EXPECT_THROW(parse_config(std::filesystem::path("/nonexistent/dir/x.toml")), IoError);
}

TEST(Config, TomlRoundTrip) {
  const std::vector<std::string> ov{"sizes=[2,4,6]", "sigma_rule=\"fixed\"", "sigma=0.1",
                                    "master_seed=99", "grid_dt_fraction=0.003", "state_kind=\"basis_all_up\""};
  const RunConfig a = parse_config_text("", "f", ov);
  const std::string text = to_toml(a, "header line");
  EXPECT_EQ(text.rfind("# header line", 0), 0u);
  const RunConfig b = parse_config_text(text, "roundtrip");
  EXPECT_EQ(to_toml(b, "header line"), text);
  EXPECT_EQ(b.experiment.grid.dt_fraction, 0.003);
}
