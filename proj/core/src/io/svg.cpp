#include "rmteq/io/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "rmteq/errors.hpp"
#include "rmteq/io/csv.hpp"

namespace rmteq::io {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  void add(double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
};

void widen(double& lo, double& hi) {
  if (hi > lo) return;
  const double pad = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
  lo -= pad;
  hi += pad;
}

std::vector<std::pair<double, double>> finite_points(const ChartSeries& s) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : s.points) {
    if (std::isfinite(p.first) && std::isfinite(p.second)) out.push_back(p);
  }
  return out;
}

// Half-width of the histogram bar around each centre.
double half_bar(const std::vector<std::pair<double, double>>& pts, std::size_t i) {
  if (pts.size() < 2) return 0.5;
  const double left = i > 0 ? pts[i].first - pts[i - 1].first : pts[i + 1].first - pts[i].first;
  return 0.5 * left;
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / std::max(1, target - 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double step = (r <= 1.0 ? 1.0 : r <= 2.0 ? 2.0 : r <= 5.0 ? 5.0 : 10.0) * mag;
  std::vector<double> ticks;
  const auto first = static_cast<long long>(std::ceil(lo / step - 1e-9));
  for (long long k = first;; ++k) {
    const double t = static_cast<double>(k) * step;
    if (t > hi + 1e-9 * step) break;
    ticks.push_back(t == 0.0 ? 0.0 : t);
  }
  return ticks;
}

std::string render_svg(const std::vector<ChartSeries>& series, ChartKind kind,
                       const ChartOptions& opt) {
  Bounds b;
  std::size_t total = 0;
  std::vector<std::vector<std::pair<double, double>>> pts;
  for (const auto& s : series) {
    pts.push_back(finite_points(s));
    const ChartKind k = s.kind.value_or(kind);
    const auto& ps = pts.back();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (k == ChartKind::Histogram) {
        const double h = half_bar(ps, i);
        b.add(ps[i].first - h, ps[i].second);
        b.add(ps[i].first + h, 0.0);
      } else {
        b.add(ps[i].first, ps[i].second);
      }
    }
    total += ps.size();
  }
  if (total == 0) throw InvalidArgument("render_svg: no finite points to plot");
  if (opt.y_from_zero) b.y0 = std::min(b.y0, 0.0);
  widen(b.x0, b.x1);
  widen(b.y0, b.y1);
  const double ypad = 0.05 * (b.y1 - b.y0);
  b.y1 += ypad;
  if (!(opt.y_from_zero && b.y0 == 0.0)) b.y0 -= ypad;

  const double left = 80, right = 30, top = opt.title.empty() ? 20 : 45, bottom = 60;
  const double pw = opt.width - left - right;
  const double ph = opt.height - top - bottom;
  auto sx = [&](double x) { return left + (x - b.x0) / (b.x1 - b.x0) * pw; };
  auto sy = [&](double y) { return top + ph - (y - b.y0) / (b.y1 - b.y0) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
    << opt.height << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << opt.width << "\" height=\"" << opt.height
    << "\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    o << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(opt.title) << "</text>\n";
  }

  // Axes and ticks.
  o << "<g stroke=\"#000\" stroke-width=\"1\" fill=\"none\">\n";
  o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
    << "\" height=\"" << num(ph) << "\"/>\n";
  const auto xt = nice_ticks(b.x0, b.x1);
  const auto yt = nice_ticks(b.y0, b.y1);
  for (double t : xt) {
    o << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(sx(t))
      << "\" y2=\"" << num(top + ph + 5) << "\"/>\n";
  }
  for (double t : yt) {
    o << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(sy(t)) << "\" x2=\"" << num(left)
      << "\" y2=\"" << num(sy(t)) << "\"/>\n";
  }
  o << "</g>\n<g fill=\"#000\">\n";
  for (double t : xt) {
    o << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(top + ph + 19)
      << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : yt) {
    o << "<text x=\"" << num(left - 8) << "\" y=\"" << num(sy(t) + 4) << "\" text-anchor=\"end\">"
      << tick_label(t) << "</text>\n";
  }
  if (!opt.x_label.empty()) {
    o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(opt.height - 15.0)
      << "\" text-anchor=\"middle\">" << escape(opt.x_label) << "</text>\n";
  }
  if (!opt.y_label.empty()) {
    o << "<text x=\"18\" y=\"" << num(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num(top + ph / 2) << ")\">" << escape(opt.y_label) << "</text>\n";
  }
  o << "</g>\n";

  // Data.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& ps = pts[si];
    if (ps.empty()) continue;
    const std::string color = kPalette[si % kPalette.size()];
    const ChartKind k = series[si].kind.value_or(kind);
    const std::string dash = series[si].dashed ? " stroke-dasharray=\"6 4\"" : "";
    if (k == ChartKind::Line) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"" << dash
        << " points=\"";
      for (std::size_t i = 0; i < ps.size(); ++i) {
        o << (i ? " " : "") << num(sx(ps[i].first)) << ',' << num(sy(ps[i].second));
      }
      o << "\"/>\n";
    } else if (k == ChartKind::Scatter) {
      o << "<g fill=\"" << color << "\">\n";
      for (const auto& p : ps) {
        o << "<circle cx=\"" << num(sx(p.first)) << "\" cy=\"" << num(sy(p.second)) << "\" r=\"4\"/>\n";
      }
      o << "</g>\n";
    } else {
      o << "<path fill=\"" << color << "\" fill-opacity=\"0.25\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"" << dash << " d=\"";
      const double base = sy(std::max(b.y0, 0.0));
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const double h = half_bar(ps, i);
        const double xl = sx(ps[i].first - h), xr = sx(ps[i].first + h), yv = sy(ps[i].second);
        o << (i == 0 ? "M" : " L") << num(xl) << ',' << (i == 0 ? num(base) : num(yv));
        if (i == 0) o << " L" << num(xl) << ',' << num(yv);
        o << " L" << num(xr) << ',' << num(yv);
        if (i + 1 == ps.size()) o << " L" << num(xr) << ',' << num(base) << " Z";
      }
      o << "\"/>\n";
    }
  }

  // Legend.
  double ly = top + 12;
  const double lx = left + pw - 190;
  o << "<g font-size=\"11\">\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    if (series[si].label.empty()) continue;
    const std::string color = kPalette[si % kPalette.size()];
    const ChartKind k = series[si].kind.value_or(kind);
    if (k == ChartKind::Scatter) {
      o << "<circle cx=\"" << num(lx + 10) << "\" cy=\"" << num(ly - 4) << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    } else {
      o << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 20)
        << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\""
        << (series[si].dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    }
    o << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly) << "\">" << escape(series[si].label)
      << "</text>\n";
    ly += 16;
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

void render_svg_chart(const std::vector<ChartSeries>& series, ChartKind kind,
                      const std::filesystem::path& path, const ChartOptions& options) {
  write_text_file(path, render_svg(series, kind, options));
}

}  // namespace rmteq::io
