// Acceptance suite: `rmteq_acceptance --criterion N` runs one criterion,
// no argument runs all of them. Each prints one PASS/FAIL line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "rmteq/analytics.hpp"
#include "rmteq/dephasing.hpp"
#include "rmteq/ensemble.hpp"
#include "rmteq/fit.hpp"
#include "rmteq/histogram.hpp"
#include "rmteq/io/format.hpp"
#include "rmteq/statistics.hpp"

using namespace rmteq;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

constexpr std::uint64_t kSeed = 20240601;

Outcome criterion_1() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream d;
  for (std::size_t n : {2u, 4u, 8u, 16u, 32u}) {
    const MeanSe m = mc_gap_moment(n, 1.0, 2000, 2, kSeed + n);
    const double pred = predicted_gap_dispersion(static_cast<int>(n), 1.0);
    const double z = std::abs(m.mean - pred) / m.se;
    const double rel = std::abs(m.mean - pred) / pred;
    const bool pass = z <= 4.0 && rel <= 0.03;
    ok = ok && pass;
    d << " N=" << n << ":" << num(m.mean) << "/" << num(pred) << "(z=" << num(z) << ")";
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 60.0;
  d << " t=" << num(secs) << "s";
  return {ok, d.str()};
}

Outcome criterion_2() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int n = 2; n <= 8; ++n) {
    for (double sigma : {1.0, 1.0 / std::sqrt(double(n))}) {
      const double q = quadrature_gap_dispersion(KernelContext(n, sigma));
      const double p = predicted_gap_dispersion(n, sigma);
      worst = std::max(worst, std::abs(q - p) / p);
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-8 && secs < 5.0, " max rel err=" + num(worst) + " t=" + num(secs) + "s"};
}

// Both sides are sums over ordered pairs i != j.
Outcome criterion_3() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream d;
  for (int n : {2, 4, 6}) {
    const double pairs = n * (n - 1.0);
    const MeanSe m = mc_gap_moment(static_cast<std::size_t>(n), 1.0, 2000, 4, kSeed + 100 + n);
    const double mc = pairs * m.mean;
    const double se = pairs * m.se;
    const double quad = quadrature_fourth_moment(KernelContext(n, 1.0));
    const double pred = predicted_fourth_moment(n, 1.0);
    const double z = std::abs(mc - pred) / se;
    const double rel = std::abs(quad - pred) / pred;
    ok = ok && z <= 4.0 && rel <= 1e-7;
    d << " N=" << n << ": target " << num(pred) << " MC " << num(mc) << "(z=" << num(z) << ") quad "
      << num(quad) << "(rel=" << num(rel) << ")";
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 60.0;
  d << " t=" << num(secs) << "s";
  return {ok, d.str()};
}

Outcome criterion_4() {
  bool ok = true;
  std::ostringstream d;
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    const auto xs = mc_gap_power_samples(n, 1.0, 2000, 2, kSeed + 200 + n);
    const BootstrapEstimate b = bootstrap_relative_variance(xs, 200, kSeed + 300 + n);
    const double bound = variance_ratio_bound(static_cast<int>(n));
    const bool pass = b.estimate <= bound + 3.0 * b.se;
    ok = ok && pass;
    d << " N=" << n << ":" << num(b.estimate) << "+-" << num(b.se) << " vs " << num(bound)
      << (pass ? "" : "(over)");
  }
  return {ok, d.str()};
}

ExperimentConfig desk_config() {
  ExperimentConfig cfg;
  for (int l = 2; l <= 8; ++l) cfg.sizes.push_back(SizeSpec::from_spins(l));
  cfg.sigma_rule = SigmaRule{SigmaRuleKind::InverseSqrtN, 1.0};
  cfg.samples_per_size = 200;
  cfg.state_kind = StateKind::HaarRandom;
  cfg.master_seed = kSeed;
  return cfg;
}

const EnsembleResult& desk_run(double* seconds = nullptr) {
  static double elapsed = 0.0;
  static const EnsembleResult result = [] {
    const auto t0 = Clock::now();
    EnsembleResult r = run_ensemble(desk_config());
    elapsed = seconds_since(t0);
    return r;
  }();
  if (seconds) *seconds = elapsed;
  return result;
}

Outcome criterion_5() {
  double secs = 0.0;
  const EnsembleResult& r = desk_run(&secs);
  std::ostringstream d;
  d << " c_num(L=2..8)=";
  for (const auto& s : r.summary.per_size) d << num(s.c_num) << (s.num_spins < 8 ? "," : "");
  if (!r.summary.fit) return {false, d.str() + " fit unavailable"};
  const FitResult& f = *r.summary.fit;
  const bool rising = f.a() < 0.0 && f.b() > 0.0;
  const bool in_band = f.c() >= 1.27 && f.c() <= 1.47;
  d << " fit a=" << num(f.a()) << " b=" << num(f.b()) << " c=" << num(f.c()) << " (band [1.27, 1.47])"
    << " t=" << num(secs) << "s";
  return {rising && in_band && secs <= 1800.0, d.str()};
}

Outcome criterion_6() {
  const EnsembleResult& r = desk_run();
  std::size_t violations = 0;
  double worst = -1e300;
  for (const auto& rec : r.records) {
    const double margin = rec.g2_inf - 1.0 / rec.d_eff;
    worst = std::max(worst, margin);
    if (margin > 0.0) ++violations;
  }
  return {violations == 0, " samples=" + std::to_string(r.records.size()) + " violations=" +
                               std::to_string(violations) + " max(g2_inf - 1/d_eff)=" + num(worst)};
}

Outcome criterion_7() {
  bool ok = true;
  std::ostringstream d;
  const GridRule grid{1.0 / 64.0, 50.0};
  for (int l : {4, 6}) {
    const SizeSpec size = SizeSpec::from_spins(l);
    int good = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
      const SampleState s = prepare_sample(size, SigmaRule{}, StateKind::HaarRandom, grid,
                                           derive_sample_seed(kSeed + 700 + l, k));
      const std::vector<double> times = s.grid.times();
      const SignalTrace tr = time_signal(s.data, times);
      if (reimann_violation_fraction(tr, s.data.d_eff) < std::pow(s.data.d_eff, -1.0 / 3.0)) ++good;
    }
    ok = ok && good >= 95;
    d << " L=" << l << ": " << good << "/100";
  }
  return {ok, d.str()};
}

Outcome criterion_8() {
  const EnsembleResult& r = desk_run();
  bool ok = true;
  std::ostringstream bf, de;
  double prev_b = INFINITY, prev_d = INFINITY;
  for (const auto& s : r.summary.per_size) {
    const double b = s.bound_fraction.mean;
    const double inv = 1.0 / s.d_eff.mean;
    ok = ok && b < prev_b && inv < prev_d;
    prev_b = b;
    prev_d = inv;
    bf << num(b) << " ";
    de << num(inv) << " ";
  }
  return {ok, " bound_fraction: " + bf.str() + "| 1/mean(d_eff): " + de.str()};
}

Outcome criterion_9() {
  std::vector<Histogram> hs;
  std::ostringstream d;
  bool ok = true;
  for (std::size_t n : {8u, 10u}) {
    GapHistogramBuilder b(50, 0.0, 5.0);
    for (std::uint64_t k = 0; k < 10000; ++k) {
      RngStream rng(derive_sample_seed(kSeed + 900 + n, k));
      b.add_spectrum(eigenvalues(sample_gue(n, 1.0 / std::sqrt(double(n)), rng)));
    }
    hs.push_back(b.finish());
    const Modality m = unimodality(hs.back(), 5);
    ok = ok && m.is_unimodal;
    d << " N=" << n << " modes=" << m.n_modes << " outside=" << hs.back().outside;
  }
  const double dist = l1_distance(hs[0], hs[1]);
  ok = ok && dist < 0.1;
  d << " L1=" << num(dist);
  return {ok, d.str()};
}

// Noise is rescaled to an RMS of exactly the quoted RMSE.
Outcome criterion_10() {
  constexpr double a = -0.94, b = 0.44, c = 1.368, noise = 0.0059;
  std::vector<FitPoint> exact, noisy;
  std::vector<double> eps;
  RngStream rng(kSeed + 1000);
  for (int l = 2; l <= 10; ++l) eps.push_back(rng.gaussian());
  double ms = 0.0;
  for (double e : eps) ms += e * e;
  const double scale = noise / std::sqrt(ms / static_cast<double>(eps.size()));
  for (int l = 2; l <= 10; ++l) {
    const double y = a * std::exp(-b * l) + c;
    exact.push_back({double(l), y});
    noisy.push_back({double(l), y + scale * eps[static_cast<std::size_t>(l - 2)]});
  }
  const FitResult fe = fit_shifted_exponential(exact);
  const double err = std::max({std::abs(fe.a() - a) / std::abs(a), std::abs(fe.b() - b) / b,
                               std::abs(fe.c() - c) / c});
  const FitResult fn = fit_shifted_exponential(noisy);
  const bool exact_ok = err <= 1e-8;
  const bool c_ok = std::abs(fn.c() - c) <= 0.02;
  const bool rmse_ok = fn.rmse() >= 0.5 * noise && fn.rmse() <= noise;
  return {exact_ok && c_ok && rmse_ok,
          " exact max rel err=" + num(err) + " noisy fit a=" + num(fn.a()) + " b=" + num(fn.b()) +
              " c=" + num(fn.c()) + " rmse=" + num(fn.rmse())};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome criterion_11() {
  const fs::path root = fs::temp_directory_path() / "rmteq_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> csv, json;
  std::ostringstream sink;
  for (int w : {1, 4, 8}) {
    const fs::path dir = root / ("w" + std::to_string(w));
    const int code = cli::run({"ensemble", "--set", "sizes=[2,3,4,5]", "--set", "samples_per_size=24",
                               "--set", "master_seed=7", "--set", "workers=" + std::to_string(w),
                               "--out", dir.string()},
                              sink, sink);
    if (code != 0) return {false, " ensemble exited with " + std::to_string(code)};
    csv.push_back(slurp(dir / "records.csv"));
    json.push_back(slurp(dir / "summary.json"));
  }
  const bool ok = !csv[0].empty() && csv[0] == csv[1] && csv[0] == csv[2] && json[0] == json[1] &&
                  json[0] == json[2];
  return {ok, " records.csv " + std::to_string(csv[0].size()) + " bytes, summary.json " +
                  std::to_string(json[0].size()) + " bytes, workers 1/4/8 " +
                  (ok ? "identical" : "differ")};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria = {
    {"Monte Carlo gap dispersion 2 sigma^2 (N + 1)", criterion_1},
    {"quadrature gap dispersion", criterion_2},
    {"fourth moment 8 sigma^4 N (N + 1)", criterion_3},
    {"variance-ratio bound (N - 1)/(N + 1)", criterion_4},
    {"c_num experiment, fitted asymptote", criterion_5},
    {"equilibrium bound g2_inf <= 1/d_eff", criterion_6},
    {"Reimann bound", criterion_7},
    {"bound-crossing and 1/d_eff trends", criterion_8},
    {"gap histogram unimodality and N = 8 vs 10 distance", criterion_9},
    {"shifted-exponential fit recovery", criterion_10},
    {"determinism across worker counts", criterion_11},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--criterion" && i + 1 < argc) which.push_back(std::stoi(argv[++i]));
  }
  if (which.empty()) {
    for (int k = 1; k <= static_cast<int>(kCriteria.size()); ++k) which.push_back(k);
  }
  int failed = 0;
  for (int k : which) {
    if (k < 1 || k > static_cast<int>(kCriteria.size())) {
      std::cerr << "unknown criterion " << k << "\n";
      return 2;
    }
    const auto& [name, fn] = kCriteria[static_cast<std::size_t>(k - 1)];
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string(" exception: ") + e.what()};
    }
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << k << " (" << name << "):" << o.detail
              << std::endl;
    failed += o.passed ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
