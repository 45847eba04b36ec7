#pragma once

#include <filesystem>
#include <string>

#include "rmteq/ensemble.hpp"
#include "rmteq/io/config.hpp"

namespace rmteq::io {

/**
 * One JSON object with keys
 *
 *   per_size     [{L, N, sigma, samples, completed, censored, rejected,
 *                  mean_t_fc, se_t_fc, mean_d_eff, se_d_eff,
 *                  mean_sigma_g_sq, se_sigma_g_sq, mean_g2_inf,
 *                  mean_bound_fraction, se_bound_fraction, c_num,
 *                  predicted_teq}]
 *   fit          {a, b, c, rmse, n_points, bootstrap: {resamples, failed,
 *                  se_a, se_b, se_c}} or null
 *   analytic     {c_analytic_limit, c_analytic: [{N, value}],
 *                  predicted_dispersion: [{N, sigma, value}]}
 *   config_echo  resolved configuration without `workers`, which never
 *                affects results
 *
 * mean_t_fc and c_num are null for a size without completed samples.
 */
std::string summary_json(const EnsembleSummary& summary, const RunConfig& cfg);

void write_summary_json(const EnsembleSummary& summary, const RunConfig& cfg,
                        const std::filesystem::path& path);

/// Resolved configuration as a JSON object string (workers excluded).
std::string config_echo_json(const RunConfig& cfg);

}  // namespace rmteq::io
