#include <gtest/gtest.h>

#include <json.hpp>

#include "rmteq/errors.hpp"
#include "rmteq/io/config.hpp"
#include "rmteq/io/summary.hpp"
#include "rmteq/io/svg.hpp"

using namespace rmteq;
using nlohmann::json;

TEST(SummaryJson, StructureAndWorkerIndependence) {
  std::vector<std::string> ov{"sizes=[2,3]", "samples_per_size=6", "master_seed=5"};
  io::RunConfig cfg = io::parse_config_text("", "t", ov);
  const EnsembleResult r = run_ensemble(cfg.experiment);
  const std::string a = io::summary_json(r.summary, cfg);
  cfg.experiment.workers = 3;
  EXPECT_EQ(io::summary_json(r.summary, cfg), a);
  const json j = json::parse(a);
  ASSERT_EQ(j["per_size"].size(), 2u);
  EXPECT_EQ(j["per_size"][1]["N"], 8);
  EXPECT_EQ(j["per_size"][1]["samples"], 6);
  EXPECT_TRUE(j.contains("fit"));
  EXPECT_DOUBLE_EQ(j["analytic"]["c_analytic_limit"].get<double>(), 1.375);
  EXPECT_FALSE(j["config_echo"].contains("workers"));
  EXPECT_EQ(j["config_echo"]["master_seed"], 5);
}

TEST(Svg, DeterministicAndWellFormed) {
  std::vector<io::ChartSeries> s{{"a", {{0, 1}, {1, 2}, {2, 1.5}}, std::nullopt, false},
                                 {"b", {{0, 0.5}, {2, 0.5}}, io::ChartKind::Line, true}};
  const std::string x = io::render_svg(s, io::ChartKind::Scatter, {"title", "x", "y"});
  EXPECT_EQ(x, io::render_svg(s, io::ChartKind::Scatter, {"title", "x", "y"}));
  EXPECT_NE(x.find("<svg"), std::string::npos);
  EXPECT_NE(x.find("</svg>"), std::string::npos);
  EXPECT_NE(x.find("stroke-dasharray"), std::string::npos);
  EXPECT_NE(x.find(">title<"), std::string::npos);
}

TEST(Svg, EscapesText) {
  std::vector<io::ChartSeries> s{{"a<b & c", {{0, 1}, {1, 2}}, std::nullopt, false}};
  const std::string x = io::render_svg(s, io::ChartKind::Line);
  EXPECT_NE(x.find("a&lt;b &amp; c"), std::string::npos);
}

TEST(Svg, RejectsEmptyData) {
  std::vector<io::ChartSeries> s{{"a", {{0, NAN}}, std::nullopt, false}};
  EXPECT_THROW(io::render_svg(s, io::ChartKind::Line), InvalidArgument);
}

TEST(Svg, NiceTicks) {
  const auto unit = io::nice_ticks(0.0, 1.0, 6);
  ASSERT_EQ(unit.size(), 6u);
  for (std::size_t i = 0; i < unit.size(); ++i) EXPECT_NEAR(unit[i], 0.2 * double(i), 1e-15);
  const auto t = io::nice_ticks(-3.0, 17.0, 5);
  EXPECT_EQ(t, (std::vector<double>{0.0, 5.0, 10.0, 15.0}));
  const auto sym = io::nice_ticks(-0.7, 0.7, 6);
  EXPECT_EQ(sym, (std::vector<double>{-0.5, 0.0, 0.5}));
  EXPECT_FALSE(std::signbit(sym[1]));
}

TEST(SummaryJson, MinimalRunAndCnumConsistency) {
  std::vector<std::string> ov{"sizes=[2]", "samples_per_size=1"};
  const io::RunConfig one = io::parse_config_text("", "t", ov);
  const json j1 = json::parse(io::summary_json(run_ensemble(one.experiment).summary, one));
  EXPECT_EQ(j1["per_size"].size(), 1u);

  std::vector<std::string> ov2{"sizes=[2,3,4]", "samples_per_size=20"};
  const io::RunConfig cfg = io::parse_config_text("", "t", ov2);
  const json j = json::parse(io::summary_json(run_ensemble(cfg.experiment).summary, cfg));
  for (const auto& e : j["per_size"]) {
    ASSERT_FALSE(e["c_num"].is_null());
    const double expect = c_num(e["N"].get<std::size_t>(), e["sigma"].get<double>(), e["mean_t_fc"].get<double>());
    EXPECT_NEAR(e["c_num"].get<double>(), expect, 1e-12 * expect);
  }
}

TEST(Svg, SinglePoint) {
  std::vector<io::ChartSeries> s{{"p", {{0.0, 0.0}}, std::nullopt, false}};
  const std::string x = io::render_svg(s, io::ChartKind::Scatter);
  EXPECT_NE(x.find("<circle"), std::string::npos);
  EXPECT_EQ(x.find("nan"), std::string::npos);
}
