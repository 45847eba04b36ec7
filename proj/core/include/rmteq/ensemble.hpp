#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rmteq/dephasing.hpp"
#include "rmteq/fit.hpp"
#include "rmteq/gue.hpp"
#include "rmteq/statistics.hpp"

namespace rmteq {

enum class SigmaRuleKind { Fixed, InverseSqrtN };

struct SigmaRule {
  SigmaRuleKind kind = SigmaRuleKind::InverseSqrtN;
  double value = 1.0;  ///< used by Fixed only

  double sigma_for(std::size_t n) const;
};

/// One system size. `num_spins` is set when N = 2^L.
struct SizeSpec {
  std::size_t n = 0;
  std::optional<int> num_spins;

  static SizeSpec from_spins(int l);
  static SizeSpec from_dim(std::size_t n);

  /// L when known, otherwise log2 N.
  double label() const;
};

/// dt = dt_fraction * T_pred, t_max = t_max_factor * T_pred, with T_pred
/// the c = 1 prediction for the size at hand.
struct GridRule {
  double dt_fraction = 1.0 / 64.0;
  double t_max_factor = 40.0;

  TimeGridSpec for_size(std::size_t n, double sigma) const;
};

struct ExperimentConfig {
  std::vector<SizeSpec> sizes;
  SigmaRule sigma_rule;
  int samples_per_size = 200;
  StateKind state_kind = StateKind::HaarRandom;
  GridRule grid;
  std::uint64_t master_seed = 0;
  int workers = 1;

  /// Throws InvalidArgument on an unusable configuration.
  void validate() const;

  /// Seed index of a cell: size_position * M + sample_number.
  std::uint64_t global_index(std::size_t size_position, std::size_t sample_number) const {
    return static_cast<std::uint64_t>(size_position) * static_cast<std::uint64_t>(samples_per_size) +
           sample_number;
  }
};

struct SampleRecord {
  int num_spins = 0;
  std::size_t n = 0;
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  double sigma_g_sq = 0.0;
  std::optional<double> t_fc;
  bool censored = false;
  double d_eff = 0.0;
  double g2_inf = 0.0;
  double bound_fraction = 0.0;
  bool rejected_degenerate = false;

  bool completed() const noexcept { return t_fc.has_value(); }
  bool operator==(const SampleRecord&) const = default;
};

/// All intermediate objects of one Monte Carlo cell.
struct SampleState {
  std::uint64_t seed = 0;
  double sigma = 0.0;
  Spectrum spectrum;
  DephasingData data;
  TimeGridSpec grid;
  bool degenerate = false;
};

/// Draws H, then the initial state, from RngStream(seed), both through the
/// same stream, and builds the dephasing data for the bulk magnetisation.
SampleState prepare_sample(const SizeSpec& size, const SigmaRule& rule, StateKind state,
                           const GridRule& grid, std::uint64_t seed);

/// Runs one cell through first-crossing detection.
SampleRecord simulate_sample(const ExperimentConfig& cfg, std::size_t size_position,
                             std::size_t sample_number);

struct SizeSummary {
  int num_spins = 0;
  std::size_t n = 0;
  double sigma = 0.0;
  std::size_t samples = 0;
  std::size_t completed = 0;
  std::size_t censored = 0;
  std::size_t rejected = 0;
  MeanSe t_fc;
  MeanSe sigma_g_sq;
  MeanSe d_eff;
  MeanSe g2_inf;
  MeanSe bound_fraction;
  double c_num = 0.0;  ///< 0 when no sample completed
  double predicted_teq = 0.0;
  double predicted_dispersion = 0.0;
};

struct BootstrapFit {
  int resamples = 0;
  int failed = 0;
  double se_a = 0.0;
  double se_b = 0.0;
  double se_c = 0.0;
};

struct EnsembleSummary {
  std::vector<SizeSummary> per_size;
  std::optional<FitResult> fit;
  std::optional<BootstrapFit> bootstrap;
};

struct EnsembleResult {
  std::vector<SampleRecord> records;  ///< ordered by global index
  EnsembleSummary summary;
};

/// Full Monte Carlo experiment. Output depends only on `cfg` minus the
/// worker count. A numeric failure aborts the run with the seed of the
/// lowest-index failing sample.
EnsembleResult run_ensemble(const ExperimentConfig& cfg);

/// Aggregates records (ordered as run_ensemble emits them) per size.
EnsembleSummary summarize(const ExperimentConfig& cfg, const std::vector<SampleRecord>& records,
                          int bootstrap_resamples = 200);

/// t_fc * 2 sqrt(2 sigma^2 (N + 1)) / pi.
double c_num(std::size_t n, double sigma, double mean_t_fc);

/// Per-sample values of sum_{i != j} G_ij^power / (N (N - 1)) for m GUE
/// draws seeded with derive_sample_seed(master_seed, k), k = 0..m-1.
std::vector<double> mc_gap_power_samples(std::size_t n, double sigma, std::size_t m, int power,
                                         std::uint64_t master_seed, int workers = 1);

/// Mean and standard error of the above; power must be 2 or 4.
MeanSe mc_gap_moment(std::size_t n, double sigma, std::size_t m, int power,
                     std::uint64_t master_seed, int workers = 1);

}  // namespace rmteq
