#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>

#include "rmteq/analytics.hpp"
#include "rmteq/dephasing.hpp"
#include "rmteq/ensemble.hpp"
#include "rmteq/errors.hpp"
#include "rmteq/histogram.hpp"
#include "rmteq/io/config.hpp"
#include "rmteq/io/csv.hpp"
#include "rmteq/io/format.hpp"
#include "rmteq/io/summary.hpp"
#include "rmteq/io/svg.hpp"
#include "rmteq/statistics.hpp"

namespace rmteq::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string out = "out";
  std::string input;
};

io::RunConfig load(const CommonArgs& a) {
  std::optional<fs::path> path;
  if (!a.config.empty()) path = a.config;
  return io::parse_config(path, a.overrides);
}

void write_manifest(const fs::path& dir, const std::string& subcommand, const io::RunConfig& cfg) {
  io::write_text_file(dir / "manifest.toml",
                      io::to_toml(cfg, "rmt-eq " RMTEQ_VERSION " " + subcommand +
                                           "; rerun with --config manifest.toml"));
}

void write_json(const fs::path& path, const ordered_json& j) { io::write_text_file(path, j.dump(2) + "\n"); }

std::uint64_t cell_seed(const io::RunConfig& cfg) {
  return derive_sample_seed(cfg.experiment.master_seed,
                            cfg.experiment.global_index(0, cfg.sample_index));
}

// sample

int cmd_sample(const CommonArgs& a, std::ostream& out) {
  const io::RunConfig cfg = load(a);
  const SizeSpec size = cfg.experiment.sizes.front();
  const double sigma = cfg.experiment.sigma_rule.sigma_for(size.n);
  const std::uint64_t seed = cell_seed(cfg);
  RngStream rng(seed);
  const Spectrum spec = eigendecompose(sample_gue(size.n, sigma, rng));
  const fs::path dir(a.out);
  io::write_spectrum_csv(spec.energies, dir / "spectrum.csv");
  write_manifest(dir, "sample", cfg);
  out << "N=" << size.n << " sigma=" << io::format_real(sigma) << " seed=" << seed << " -> "
      << (dir / "spectrum.csv").string() << "\n";
  return kSuccess;
}

// spectral-stats

int cmd_spectral_stats(const CommonArgs& a, std::ostream& out) {
  const io::RunConfig cfg = load(a);
  const auto& ex = cfg.experiment;
  const fs::path dir(a.out);
  const auto m = static_cast<std::size_t>(ex.samples_per_size);
  ordered_json per = ordered_json::array();
  std::vector<io::ChartSeries> hist_series;
  for (std::size_t p = 0; p < ex.sizes.size(); ++p) {
    const std::size_t n = ex.sizes[p].n;
    const double sigma = ex.sigma_rule.sigma_for(n);
    const double s_max = 5.0 * sigma * std::sqrt(static_cast<double>(n));
    GapHistogramBuilder builder(cfg.histogram_bins, 0.0, s_max);
    std::vector<double> x2(m), x4(m);
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
    for (std::size_t k = 0; k < m; ++k) {
      RngStream rng(derive_sample_seed(ex.master_seed, ex.global_index(p, k)));
      const Eigen::VectorXd e = eigenvalues(sample_gue(n, sigma, rng));
      builder.add_spectrum(e);
      double s2 = 0.0, s4 = 0.0;
      for (Eigen::Index i = 0; i < e.size(); ++i) {
        for (Eigen::Index j = i + 1; j < e.size(); ++j) {
          const double g2 = (e(j) - e(i)) * (e(j) - e(i));
          s2 += 2.0 * g2;
          s4 += 2.0 * g2 * g2;
        }
      }
      x2[k] = s2 / pairs;
      x4[k] = s4;  // sum over ordered pairs, compared with 8 sigma^4 N (N + 1)
    }
    const Histogram h = builder.finish();
    const std::string stem = "histogram_N" + std::to_string(n);
    io::write_histogram_csv(h, dir / (stem + ".csv"));
    io::ChartSeries hs{"N = " + std::to_string(n), {}, std::nullopt, false};
    for (std::size_t i = 0; i < h.bins(); ++i) hs.points.emplace_back(h.center(i), h.densities[i]);
    hist_series.push_back(std::move(hs));

    const MeanSe d2 = mean_se(x2);
    const MeanSe d4 = mean_se(x4);
    const double pred2 = predicted_gap_dispersion(static_cast<int>(n), sigma);
    const double pred4 = predicted_fourth_moment(static_cast<int>(n), sigma);
    ordered_json e;
    e["N"] = n;
    e["sigma"] = sigma;
    e["samples"] = m;
    e["dispersion"] = {{"mean", d2.mean}, {"se", d2.se}, {"predicted", pred2},
                       {"z", d2.se > 0 ? (d2.mean - pred2) / d2.se : 0.0}};
    e["fourth_moment"] = {{"mean", d4.mean}, {"se", d4.se}, {"predicted", pred4},
                          {"z", d4.se > 0 ? (d4.mean - pred4) / d4.se : 0.0}};
    if (m >= 2) {
      const BootstrapEstimate rv = bootstrap_relative_variance(x2, 200, ex.master_seed ^ n);
      e["relative_variance"] = {{"estimate", rv.estimate}, {"bootstrap_se", rv.se},
                                {"bound", variance_ratio_bound(static_cast<int>(n))}};
    }
    const Modality mod = unimodality(h, 5);
    e["histogram"] = {{"file", stem + ".csv"}, {"bins", h.bins()}, {"outside", h.outside},
                      {"n_modes", mod.n_modes}};
    per.push_back(e);
    out << "N=" << n << " <sigma_G^2>=" << io::format_real(d2.mean) << " +- "
        << io::format_real(d2.se) << " (predicted " << io::format_real(pred2) << "), modes="
        << mod.n_modes << "\n";
  }
  ordered_json root;
  root["per_size"] = per;
  root["config_echo"] = ordered_json::parse(io::config_echo_json(cfg));
  write_json(dir / "spectral_stats.json", root);
  io::render_svg_chart(hist_series, io::ChartKind::Histogram, dir / "gap_histograms.svg",
                       {"All-pairs gap distribution P(s)", "s = |E_i - E_j|", "P(s)", 720, 450, true});
  write_manifest(dir, "spectral-stats", cfg);
  return kSuccess;
}

// evolve

int cmd_evolve(const CommonArgs& a, std::ostream& out) {
  const io::RunConfig cfg = load(a);
  const auto& ex = cfg.experiment;
  const SizeSpec size = ex.sizes.front();
  const std::uint64_t seed = cell_seed(cfg);
  const SampleState s = prepare_sample(size, ex.sigma_rule, ex.state_kind, ex.grid, seed);
  const std::vector<double> times = s.grid.times();
  const SignalTrace trace = time_signal(s.data, times);
  const std::optional<double> t_fc = first_crossing(s.data, trace);
  const double sg2 = gap_dispersion(s.data);
  const fs::path dir(a.out);
  io::write_trace_csv(trace, dir / "trace.csv");

  std::vector<io::ChartSeries> series(3);
  series[0].label = "|g(t)|^2";
  series[1].label = "infinite-time average";
  series[1].dashed = true;
  series[2].label = "1 / d_eff";
  series[2].dashed = true;
  for (std::size_t k = 0; k < trace.size(); ++k) series[0].points.emplace_back(trace.times[k], trace.sq_values[k]);
  for (double t : {trace.times.front(), trace.times.back()}) {
    series[1].points.emplace_back(t, s.data.g2_inf);
    series[2].points.emplace_back(t, 1.0 / s.data.d_eff);
  }
  io::render_svg_chart(series, io::ChartKind::Line, dir / "trace.svg",
                       {"Time signal, N = " + std::to_string(size.n), "t", "|g(t)|^2", 720, 450, true});

  ordered_json j;
  j["N"] = size.n;
  j["L"] = size.num_spins.value_or(0);
  j["sigma"] = s.sigma;
  j["seed"] = seed;
  j["state_kind"] = std::string(io::state_kind_name(ex.state_kind));
  j["d_eff"] = s.data.d_eff;
  j["g2_inf"] = s.data.g2_inf;
  j["sigma_g_sq"] = sg2;
  j["teq_estimate"] = teq_estimate(sg2);
  j["predicted_teq"] = predicted_teq(static_cast<int>(size.n), s.sigma, 1.0);
  j["t_fc"] = t_fc ? ordered_json(*t_fc) : ordered_json(nullptr);
  j["bound_fraction"] = bound_crossing_fraction(trace, s.data.d_eff);
  j["reimann_fraction"] = reimann_violation_fraction(trace, s.data.d_eff);
  j["degenerate"] = s.degenerate;
  write_json(dir / "evolve.json", j);
  write_manifest(dir, "evolve", cfg);
  out << "N=" << size.n << " seed=" << seed << " t_fc="
      << (t_fc ? io::format_real(*t_fc) : std::string("censored"))
      << " T_eq(sigma_G)=" << io::format_real(teq_estimate(sg2)) << "\n";
  return kSuccess;
}

// ensemble

int cmd_ensemble(const CommonArgs& a, std::ostream& out) {
  const io::RunConfig cfg = load(a);
  const EnsembleResult res = run_ensemble(cfg.experiment);
  const fs::path dir(a.out);
  io::write_records_csv(res.records, dir / "records.csv");
  io::write_summary_json(res.summary, cfg, dir / "summary.json");

  io::ChartSeries data{"c_num(L)", {}, io::ChartKind::Scatter, false};
  io::ChartSeries fit{"shifted-exponential fit", {}, io::ChartKind::Line, true};
  io::ChartSeries plateau{"fitted asymptote", {}, io::ChartKind::Line, true};
  io::ChartSeries analytic{"1 + (3/8)(N-1)/(N+1)", {}, io::ChartKind::Line, false};
  io::ChartSeries bound{"mean bound-crossing fraction", {}, io::ChartKind::Line, false};
  io::ChartSeries inv_deff{"1 / mean d_eff", {}, io::ChartKind::Line, true};
  double lo = 1e300, hi = -1e300;
  for (const auto& s : res.summary.per_size) {
    const double l = s.num_spins;
    lo = std::min(lo, l);
    hi = std::max(hi, l);
    if (s.completed > 0) data.points.emplace_back(l, s.c_num);
    analytic.points.emplace_back(l, c_analytic(static_cast<int>(s.n)));
    bound.points.emplace_back(l, s.bound_fraction.mean);
    inv_deff.points.emplace_back(l, 1.0 / s.d_eff.mean);
    out << "L=" << s.num_spins << " N=" << s.n << " completed=" << s.completed
        << " censored=" << s.censored << " rejected=" << s.rejected
        << " c_num=" << io::format_real(s.c_num) << "\n";
  }
  std::vector<io::ChartSeries> fig1{data, analytic};
  if (res.summary.fit) {
    const FitResult& f = *res.summary.fit;
    for (int k = 0; k <= 100; ++k) {
      const double l = lo + (hi - lo) * k / 100.0;
      fit.points.emplace_back(l, f(l));
    }
    plateau.points = {{lo, f.c()}, {hi, f.c()}};
    fig1.push_back(fit);
    fig1.push_back(plateau);
    out << "fit: a=" << io::format_real(f.a()) << " b=" << io::format_real(f.b())
        << " c=" << io::format_real(f.c()) << " rmse=" << io::format_real(f.rmse()) << "\n";
  }
  io::render_svg_chart(fig1, io::ChartKind::Scatter, dir / "c_num.svg",
                       {"Proportionality constant vs system size", "L (N = 2^L)", "c_num", 720, 450, false});
  io::render_svg_chart({bound, inv_deff}, io::ChartKind::Line, dir / "bound_fraction.svg",
                       {"Equilibrium-bound crossings", "L (N = 2^L)", "fraction", 720, 450, true});
  write_manifest(dir, "ensemble", cfg);
  return kSuccess;
}

// verify

struct Check {
  std::string name;
  double measured;
  double expected;
  double tolerance;  // relative unless absolute is set
  bool absolute;
  bool passed() const {
    const double err = std::abs(measured - expected);
    return absolute ? err <= tolerance : err <= tolerance * std::abs(expected);
  }
};

int cmd_verify(const CommonArgs& a, std::ostream& out) {
  const io::RunConfig cfg = load(a);
  std::vector<Check> checks;
  for (double sigma : {1.0, 0.3}) {
    const Eigen::MatrixXd g = hermite_gram(21, sigma, 2 * 21 + 16);
    const double dev = (g - Eigen::MatrixXd::Identity(21, 21)).cwiseAbs().maxCoeff();
    checks.push_back({"hermite orthonormality k,l<=20 sigma=" + io::format_real(sigma), dev, 0.0, 1e-10, true});
  }
  for (int n = 1; n <= 8; ++n) {
    for (double sigma : {1.0, 1.0 / std::sqrt(static_cast<double>(n))}) {
      const KernelContext ctx(n, sigma);
      checks.push_back({"kernel trace N=" + std::to_string(n) + " sigma=" + io::format_real(sigma),
                        quadrature_kernel_trace(ctx), static_cast<double>(n), 1e-10, true});
      if (n < 2) continue;
      checks.push_back({"pair density normalisation N=" + std::to_string(n) + " sigma=" + io::format_real(sigma),
                        quadrature_pair_moment(ctx, 0), 1.0, 1e-8, true});
      checks.push_back({"gap dispersion N=" + std::to_string(n) + " sigma=" + io::format_real(sigma),
                        quadrature_gap_dispersion(ctx), predicted_gap_dispersion(n, sigma), 1e-8, false});
      checks.push_back({"fourth moment N=" + std::to_string(n) + " sigma=" + io::format_real(sigma),
                        quadrature_fourth_moment(ctx), predicted_fourth_moment(n, sigma), 1e-7, false});
    }
  }
  bool monotone = true;
  for (int n = 2; n < 64; ++n) monotone = monotone && c_analytic(n + 1) > c_analytic(n);
  checks.push_back({"c_analytic increasing in N", monotone ? 1.0 : 0.0, 1.0, 0.0, true});
  checks.push_back({"c_analytic(N=10^6) -> 1.375", c_analytic(1'000'000), kCAnalyticLimit, 1e-5, true});

  ordered_json arr = ordered_json::array();
  int failed = 0;
  for (const auto& c : checks) {
    const bool ok = c.passed();
    failed += ok ? 0 : 1;
    out << (ok ? "PASS " : "FAIL ") << c.name << ": measured " << io::format_real(c.measured)
        << ", expected " << io::format_real(c.expected) << "\n";
    arr.push_back({{"name", c.name}, {"measured", c.measured}, {"expected", c.expected},
                   {"tolerance", c.tolerance}, {"absolute", c.absolute}, {"passed", ok}});
  }
  out << (checks.size() - static_cast<std::size_t>(failed)) << "/" << checks.size() << " checks passed\n";
  const fs::path dir(a.out);
  write_json(dir / "verify.json", {{"checks", arr}, {"failed", failed}});
  write_manifest(dir, "verify", cfg);
  return failed == 0 ? kSuccess : kVerificationFailure;
}

// plot

int cmd_plot(const CommonArgs& a, std::ostream& out) {
  const fs::path in(a.input);
  const std::string header = io::read_csv_header(in);
  std::vector<io::ChartSeries> series(1);
  io::ChartKind kind = io::ChartKind::Line;
  io::ChartOptions opt;
  opt.title = in.filename().string();
  if (header == io::kTraceHeader) {
    const SignalTrace t = io::read_trace_csv(in);
    series[0].label = "|g(t)|^2";
    for (std::size_t k = 0; k < t.size(); ++k) series[0].points.emplace_back(t.times[k], t.sq_values[k]);
    opt.x_label = "t";
    opt.y_label = "|g(t)|^2";
  } else if (header == io::kHistogramHeader) {
    const Histogram h = io::read_histogram_csv(in);
    kind = io::ChartKind::Histogram;
    series[0].label = "P(s)";
    for (std::size_t i = 0; i < h.bins(); ++i) series[0].points.emplace_back(h.center(i), h.densities[i]);
    opt.x_label = "s";
    opt.y_label = "density";
    opt.y_from_zero = true;
  } else if (header == io::kRecordsHeader) {
    const auto recs = io::read_records_csv(in);
    kind = io::ChartKind::Scatter;
    series[0].label = "first-crossing time";
    for (const auto& r : recs) {
      if (r.t_fc) series[0].points.emplace_back(static_cast<double>(r.num_spins), *r.t_fc);
    }
    opt.x_label = "L";
    opt.y_label = "t_fc";
  } else if (header == io::kSpectrumHeader) {
    // Spectrum files are tiny; parse them with the trace machinery's rules.
    std::ifstream f(in);
    std::string line;
    std::getline(f, line);
    kind = io::ChartKind::Scatter;
    series[0].label = "E_k";
    while (std::getline(f, line)) {
      const auto comma = line.find(',');
      if (comma == std::string::npos) continue;
      series[0].points.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    opt.x_label = "k";
    opt.y_label = "energy";
  } else {
    throw ConfigError(in.string() + ": unrecognised CSV header '" + header + "'");
  }
  const fs::path target = fs::path(a.out) / (in.stem().string() + ".svg");
  io::render_svg_chart(series, kind, target, opt);
  out << target.string() << "\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibration of GUE Hamiltonians: sampling, dynamics and ensemble statistics",
               "rmt-eq"};
  app.set_version_flag("--version", RMTEQ_VERSION);
  app.require_subcommand(1);
  CommonArgs common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "TOML configuration file");
    sub->add_option("--set", common.overrides, "Override a configuration key (key=value)");
    sub->add_option("--out", common.out, "Output directory")->capture_default_str();
    return sub;
  };
  auto* sample = add_common(app.add_subcommand("sample", "Emit one sampled spectrum as CSV"));
  auto* stats = add_common(app.add_subcommand("spectral-stats", "Gap histograms and Monte Carlo moments vs closed forms"));
  auto* evolve = add_common(app.add_subcommand("evolve", "One time-signal trace (CSV + SVG)"));
  auto* ensemble = add_common(app.add_subcommand("ensemble", "Full c_num experiment"));
  auto* verify = add_common(app.add_subcommand("verify", "Quadrature and identity checks"));
  auto* plot = add_common(app.add_subcommand("plot", "Render a CSV produced by this tool as SVG"));
  plot->add_option("--input", common.input, "CSV file to render")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << RMTEQ_VERSION << "\n";
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "rmt-eq: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (sample->parsed()) return cmd_sample(common, out);
    if (stats->parsed()) return cmd_spectral_stats(common, out);
    if (evolve->parsed()) return cmd_evolve(common, out);
    if (ensemble->parsed()) return cmd_ensemble(common, out);
    if (verify->parsed()) return cmd_verify(common, out);
    if (plot->parsed()) return cmd_plot(common, out);
  } catch (const ConfigError& e) {
    err << "rmt-eq: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvalidArgument& e) {
    err << "rmt-eq: invalid argument: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericFailure& e) {
    err << "rmt-eq: numeric failure: " << e.what();
    if (e.seed()) err << " [seed " << *e.seed() << "]";
    err << "\n";
    return kNumericFailure;
  } catch (const IoError& e) {
    err << "rmt-eq: I/O error: " << e.what() << "\n";
    return kIoError;
  }
  return kConfigError;
}

}  // namespace rmteq::cli
