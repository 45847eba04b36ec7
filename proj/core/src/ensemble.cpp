#include "rmteq/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <thread>

#include "rmteq/analytics.hpp"
#include "rmteq/errors.hpp"
#include "rmteq/rng.hpp"

namespace rmteq {

namespace {

constexpr std::uint64_t kBootstrapStream = 0xB0075742A9C3D1E5ULL;

// Runs body(k) for k in [0, count) on `workers` threads. Tasks write only to
// their own slot; the exception of the lowest failing index is rethrown.
void parallel_for_indexed(std::size_t count, int workers,
                          const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
      try {
        body(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || count < 2) {
    drain();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(drain);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

double SigmaRule::sigma_for(std::size_t n) const {
  if (kind == SigmaRuleKind::Fixed) return value;
  return 1.0 / std::sqrt(static_cast<double>(n));
}

SizeSpec SizeSpec::from_spins(int l) {
  if (l < 1 || l > 24) throw InvalidArgument("SizeSpec: L must be in [1, 24]");
  return {std::size_t{1} << l, l};
}

SizeSpec SizeSpec::from_dim(std::size_t n) {
  if (n < 1) throw InvalidArgument("SizeSpec: N must be >= 1");
  SizeSpec s{n, std::nullopt};
  if (std::has_single_bit(n)) s.num_spins = std::countr_zero(n);
  return s;
}

double SizeSpec::label() const {
  return num_spins ? static_cast<double>(*num_spins) : std::log2(static_cast<double>(n));
}

TimeGridSpec GridRule::for_size(std::size_t n, double sigma) const {
  const double t_pred = predicted_teq(static_cast<int>(n), sigma, 1.0);
  return TimeGridSpec::around(t_pred, dt_fraction, t_max_factor);
}

void ExperimentConfig::validate() const {
  if (sizes.empty()) throw InvalidArgument("ExperimentConfig: no sizes given");
  for (const auto& s : sizes) {
    if (s.n < 2) throw InvalidArgument("ExperimentConfig: sizes must be >= 2");
  }
  if (samples_per_size < 1) throw InvalidArgument("ExperimentConfig: samples_per_size must be >= 1");
  if (sigma_rule.kind == SigmaRuleKind::Fixed && !(sigma_rule.value > 0.0)) {
    throw InvalidArgument("ExperimentConfig: fixed sigma must be positive");
  }
  if (!(grid.dt_fraction > 0.0) || !(grid.t_max_factor > 0.0)) {
    throw InvalidArgument("ExperimentConfig: grid parameters must be positive");
  }
  if (workers < 1) throw InvalidArgument("ExperimentConfig: workers must be >= 1");
}

SampleState prepare_sample(const SizeSpec& size, const SigmaRule& rule, StateKind state,
                           const GridRule& grid, std::uint64_t seed) {
  if (!size.num_spins) {
    throw InvalidArgument("prepare_sample: N = " + std::to_string(size.n) +
                          " is not a power of two; bulk magnetisation needs N = 2^L");
  }
  SampleState out;
  out.seed = seed;
  out.sigma = rule.sigma_for(size.n);
  RngStream rng(seed);
  const HermitianMatrix h = sample_gue(size.n, out.sigma, rng);
  try {
    out.spectrum = eigendecompose(h);
  } catch (const NumericFailure& e) {
    throw NumericFailure(e.what(), seed);
  }
  const InitialState psi = initial_state(state, out.spectrum, rng);
  out.data = dephasing_data(out.spectrum, bulk_magnetisation(*size.num_spins), psi);
  out.grid = grid.for_size(size.n, out.sigma);
  out.degenerate = is_degenerate(out.spectrum.energies, out.sigma);
  return out;
}

SampleRecord simulate_sample(const ExperimentConfig& cfg, std::size_t size_position,
                             std::size_t sample_number) {
  const SizeSpec& size = cfg.sizes.at(size_position);
  SampleRecord rec;
  rec.n = size.n;
  rec.num_spins = size.num_spins.value_or(0);
  rec.index = cfg.global_index(size_position, sample_number);
  rec.seed = derive_sample_seed(cfg.master_seed, rec.index);
  try {
    const SampleState s = prepare_sample(size, cfg.sigma_rule, cfg.state_kind, cfg.grid, rec.seed);
    rec.d_eff = s.data.d_eff;
    rec.g2_inf = s.data.g2_inf;
    rec.sigma_g_sq = gap_dispersion(s.data);
    const std::vector<double> times = s.grid.times();
    const SignalTrace trace = time_signal(s.data, times);
    rec.bound_fraction = bound_crossing_fraction(trace, s.data.d_eff);
    if (s.degenerate) {
      rec.rejected_degenerate = true;
      return rec;
    }
    rec.t_fc = first_crossing(s.data, trace);
    rec.censored = !rec.t_fc.has_value();
  } catch (const NumericFailure& e) {
    throw NumericFailure(std::string(e.what()) + " (sample seed " + std::to_string(rec.seed) + ")",
                         rec.seed);
  }
  return rec;
}

double c_num(std::size_t n, double sigma, double mean_t_fc) {
  if (n < 1 || !(sigma > 0.0) || !(mean_t_fc > 0.0)) {
    throw InvalidArgument("c_num: inputs must be positive");
  }
  return mean_t_fc * 2.0 * std::sqrt(2.0 * sigma * sigma * (static_cast<double>(n) + 1.0)) /
         std::numbers::pi;
}

namespace {

std::optional<FitResult> fit_c_num(const std::vector<SizeSummary>& per_size) {
  std::vector<FitPoint> pts;
  for (const auto& s : per_size) {
    if (s.completed > 0) {
      pts.push_back({s.num_spins > 0 ? static_cast<double>(s.num_spins)
                                     : std::log2(static_cast<double>(s.n)),
                     s.c_num});
    }
  }
  if (pts.size() < 4) return std::nullopt;
  return fit_shifted_exponential(pts);
}

}  // namespace

EnsembleSummary summarize(const ExperimentConfig& cfg, const std::vector<SampleRecord>& records,
                          int bootstrap_resamples) {
  const auto m = static_cast<std::size_t>(cfg.samples_per_size);
  if (records.size() != m * cfg.sizes.size()) {
    throw InvalidArgument("summarize: record count does not match the configuration");
  }
  EnsembleSummary out;
  std::vector<std::vector<double>> t_fc_by_size(cfg.sizes.size());
  for (std::size_t p = 0; p < cfg.sizes.size(); ++p) {
    const SizeSpec& size = cfg.sizes[p];
    SizeSummary s;
    s.n = size.n;
    s.num_spins = size.num_spins.value_or(0);
    s.sigma = cfg.sigma_rule.sigma_for(size.n);
    s.samples = m;
    std::vector<double> t_fc, sg, de, g2, bf;
    for (std::size_t k = 0; k < m; ++k) {
      const SampleRecord& r = records[p * m + k];
      if (r.rejected_degenerate) {
        ++s.rejected;
        continue;
      }
      sg.push_back(r.sigma_g_sq);
      de.push_back(r.d_eff);
      g2.push_back(r.g2_inf);
      bf.push_back(r.bound_fraction);
      if (r.t_fc) {
        ++s.completed;
        t_fc.push_back(*r.t_fc);
      } else {
        ++s.censored;
      }
    }
    s.t_fc = mean_se(t_fc);
    s.sigma_g_sq = mean_se(sg);
    s.d_eff = mean_se(de);
    s.g2_inf = mean_se(g2);
    s.bound_fraction = mean_se(bf);
    s.predicted_teq = predicted_teq(static_cast<int>(s.n), s.sigma, 1.0);
    s.predicted_dispersion = predicted_gap_dispersion(static_cast<int>(s.n), s.sigma);
    if (s.completed > 0 && s.t_fc.mean > 0.0) s.c_num = c_num(s.n, s.sigma, s.t_fc.mean);
    out.per_size.push_back(s);
    t_fc_by_size[p] = std::move(t_fc);
  }

  out.fit = fit_c_num(out.per_size);
  if (out.fit && bootstrap_resamples >= 2) {
    BootstrapFit bs;
    bs.resamples = bootstrap_resamples;
    std::vector<double> as, bs_, cs;
    for (int r = 0; r < bootstrap_resamples; ++r) {
      RngStream rng(derive_sample_seed(cfg.master_seed ^ kBootstrapStream, static_cast<std::uint64_t>(r)));
      std::vector<SizeSummary> resampled = out.per_size;
      for (std::size_t p = 0; p < resampled.size(); ++p) {
        const auto& src = t_fc_by_size[p];
        if (src.empty()) continue;
        double sum = 0.0;
        for (std::size_t k = 0; k < src.size(); ++k) sum += src[rng.next_u64() % src.size()];
        const double mean = sum / static_cast<double>(src.size());
        resampled[p].c_num = mean > 0.0 ? c_num(resampled[p].n, resampled[p].sigma, mean) : 0.0;
      }
      try {
        const auto f = fit_c_num(resampled);
        if (!f) {
          ++bs.failed;
          continue;
        }
        as.push_back(f->a());
        bs_.push_back(f->b());
        cs.push_back(f->c());
      } catch (const std::exception&) {
        ++bs.failed;
      }
    }
    bs.se_a = std::sqrt(sample_variance(as));
    bs.se_b = std::sqrt(sample_variance(bs_));
    bs.se_c = std::sqrt(sample_variance(cs));
    out.bootstrap = bs;
  }
  return out;
}

EnsembleResult run_ensemble(const ExperimentConfig& cfg) {
  cfg.validate();
  for (const auto& s : cfg.sizes) {
    if (!s.num_spins) {
      throw InvalidArgument("run_ensemble: N = " + std::to_string(s.n) + " is not a power of two");
    }
  }
  const auto m = static_cast<std::size_t>(cfg.samples_per_size);
  const std::size_t total = m * cfg.sizes.size();
  EnsembleResult result;
  result.records.resize(total);
  parallel_for_indexed(total, cfg.workers, [&](std::size_t k) {
    result.records[k] = simulate_sample(cfg, k / m, k % m);
  });
  result.summary = summarize(cfg, result.records);
  return result;
}

std::vector<double> mc_gap_power_samples(std::size_t n, double sigma, std::size_t m, int power,
                                         std::uint64_t master_seed, int workers) {
  if (n < 2) throw InvalidArgument("mc_gap_moment: N must be >= 2");
  if (!(sigma > 0.0)) throw InvalidArgument("mc_gap_moment: sigma must be positive");
  if (power < 2 || power % 2 != 0) throw InvalidArgument("mc_gap_moment: power must be even and >= 2");
  std::vector<double> out(m);
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  parallel_for_indexed(m, workers, [&](std::size_t k) {
    RngStream rng(derive_sample_seed(master_seed, k));
    const Eigen::VectorXd e = eigenvalues(sample_gue(n, sigma, rng));
    double s = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      for (Eigen::Index j = i + 1; j < e.size(); ++j) s += 2.0 * std::pow(e(j) - e(i), power);
    }
    out[k] = s / pairs;
  });
  return out;
}

MeanSe mc_gap_moment(std::size_t n, double sigma, std::size_t m, int power,
                     std::uint64_t master_seed, int workers) {
  if (power != 2 && power != 4) throw InvalidArgument("mc_gap_moment: power must be 2 or 4");
  if (m < 2) throw InvalidArgument("mc_gap_moment: need at least 2 samples");
  const std::vector<double> xs = mc_gap_power_samples(n, sigma, m, power, master_seed, workers);
  return mean_se(xs);
}

}  // namespace rmteq
