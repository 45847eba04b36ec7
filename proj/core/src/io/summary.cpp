#include "rmteq/io/summary.hpp"

#include <json.hpp>

#include "rmteq/analytics.hpp"
#include "rmteq/io/csv.hpp"

namespace rmteq::io {

namespace {

using nlohmann::ordered_json;

ordered_json config_echo(const RunConfig& cfg) {
  const auto& ex = cfg.experiment;
  ordered_json sizes = ordered_json::array();
  ordered_json dims = ordered_json::array();
  for (const auto& s : ex.sizes) {
    dims.push_back(s.n);
    if (s.num_spins) sizes.push_back(*s.num_spins);
  }
  ordered_json j;
  j["artifact_version"] = RMTEQ_VERSION;
  j["sizes"] = sizes.size() == ex.sizes.size() ? sizes : ordered_json(nullptr);
  j["dims"] = dims;
  j["sigma_rule"] = std::string(sigma_rule_name(ex.sigma_rule.kind));
  j["sigma"] = ex.sigma_rule.value;
  j["samples_per_size"] = ex.samples_per_size;
  j["state_kind"] = std::string(state_kind_name(ex.state_kind));
  j["grid_dt_fraction"] = ex.grid.dt_fraction;
  j["grid_t_max_factor"] = ex.grid.t_max_factor;
  j["master_seed"] = ex.master_seed;
  j["sample_index"] = cfg.sample_index;
  j["histogram_bins"] = cfg.histogram_bins;
  return j;
}

ordered_json nullable(bool present, double v) { return present ? ordered_json(v) : ordered_json(nullptr); }

}  // namespace

std::string config_echo_json(const RunConfig& cfg) { return config_echo(cfg).dump(2); }

std::string summary_json(const EnsembleSummary& summary, const RunConfig& cfg) {
  ordered_json root;
  ordered_json per = ordered_json::array();
  for (const auto& s : summary.per_size) {
    const bool done = s.completed > 0;
    ordered_json e;
    e["L"] = s.num_spins;
    e["N"] = s.n;
    e["sigma"] = s.sigma;
    e["samples"] = s.samples;
    e["completed"] = s.completed;
    e["censored"] = s.censored;
    e["rejected"] = s.rejected;
    e["mean_t_fc"] = nullable(done, s.t_fc.mean);
    e["se_t_fc"] = nullable(done, s.t_fc.se);
    e["mean_d_eff"] = s.d_eff.mean;
    e["se_d_eff"] = s.d_eff.se;
    e["mean_sigma_g_sq"] = s.sigma_g_sq.mean;
    e["se_sigma_g_sq"] = s.sigma_g_sq.se;
    e["mean_g2_inf"] = s.g2_inf.mean;
    e["mean_bound_fraction"] = s.bound_fraction.mean;
    e["se_bound_fraction"] = s.bound_fraction.se;
    e["c_num"] = nullable(done, s.c_num);
    e["predicted_teq"] = s.predicted_teq;
    per.push_back(std::move(e));
  }
  root["per_size"] = std::move(per);

  if (summary.fit) {
    ordered_json f;
    f["a"] = summary.fit->a();
    f["b"] = summary.fit->b();
    f["c"] = summary.fit->c();
    f["rmse"] = summary.fit->rmse();
    f["n_points"] = summary.fit->n_points();
    if (summary.bootstrap) {
      f["bootstrap"] = {{"resamples", summary.bootstrap->resamples},
                        {"failed", summary.bootstrap->failed},
                        {"se_a", summary.bootstrap->se_a},
                        {"se_b", summary.bootstrap->se_b},
                        {"se_c", summary.bootstrap->se_c}};
    } else {
      f["bootstrap"] = nullptr;
    }
    root["fit"] = std::move(f);
  } else {
    root["fit"] = nullptr;
  }

  ordered_json analytic;
  analytic["c_analytic_limit"] = kCAnalyticLimit;
  ordered_json ca = ordered_json::array();
  ordered_json pd = ordered_json::array();
  for (const auto& s : summary.per_size) {
    ca.push_back({{"N", s.n}, {"value", c_analytic(static_cast<int>(s.n))}});
    pd.push_back({{"N", s.n}, {"sigma", s.sigma}, {"value", s.predicted_dispersion}});
  }
  analytic["c_analytic"] = std::move(ca);
  analytic["predicted_dispersion"] = std::move(pd);
  root["analytic"] = std::move(analytic);
  root["config_echo"] = config_echo(cfg);
  return root.dump(2) + "\n";
}

void write_summary_json(const EnsembleSummary& summary, const RunConfig& cfg,
                        const std::filesystem::path& path) {
  write_text_file(path, summary_json(summary, cfg));
}

}  // namespace rmteq::io
