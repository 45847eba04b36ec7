#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "rmteq/ensemble.hpp"

namespace rmteq::io {

/// Resolved configuration of one CLI run: the experiment plus the few
/// per-subcommand knobs.
struct RunConfig {
  ExperimentConfig experiment;
  std::size_t sample_index = 0;  ///< cell used by `sample` and `evolve`
  int histogram_bins = 40;       ///< `spectral-stats`

  RunConfig();
};

/**
 * Reads a TOML document of top-level `key = value` pairs.
 *
 * Supported keys (defaults in parentheses):
 *   sizes             array of L, N = 2^L        ([2, 3, 4, 5, 6, 7, 8])
 *   dims              array of explicit N        (unset; excludes `sizes`)
 *   sigma_rule        "inverse_sqrt_n" | "fixed" ("inverse_sqrt_n")
 *   sigma             sigma for the fixed rule   (1.0)
 *   samples_per_size  M                          (200)
 *   state_kind        "haar_random" | "basis_all_up" ("haar_random")
 *   grid_dt_fraction  dt / T_pred                (0.015625)
 *   grid_t_max_factor t_max / T_pred             (40.0)
 *   master_seed       unsigned 64-bit            (0)
 *   workers           worker threads             (1)
 *   sample_index      cell for sample/evolve     (0)
 *   histogram_bins    bins for spectral-stats    (40)
 *   artifact_version  informational, written into manifests
 *
 * `overrides` are `key=value` strings using the same value syntax, applied
 * after the file. Errors are ConfigError with a `source:line:` prefix; an
 * unreadable file is IoError.
 */
RunConfig parse_config(const std::optional<std::filesystem::path>& path,
                       std::span<const std::string> overrides = {});

RunConfig parse_config_text(std::string_view text, std::string_view source_name,
                            std::span<const std::string> overrides = {});

/// TOML rendering of every resolved key; parse_config_text(to_toml(c))
/// reproduces c.
std::string to_toml(const RunConfig& cfg, std::string_view header_comment = {});

std::string_view state_kind_name(StateKind kind);
std::string_view sigma_rule_name(SigmaRuleKind kind);

}  // namespace rmteq::io
