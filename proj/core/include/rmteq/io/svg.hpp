#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rmteq::io {

enum class ChartKind { Line, Scatter, Histogram };

struct ChartSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  std::optional<ChartKind> kind;  ///< overrides the chart-wide kind
  bool dashed = false;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 450;
  bool y_from_zero = false;
};

/// Self-contained SVG with axes, tick labels, a legend and one polyline,
/// marker set or bar outline per series. Histogram series take
/// (bin centre, density) points; bars span the spacing between centres.
/// Output bytes depend only on the input. Non-finite points are skipped.
std::string render_svg(const std::vector<ChartSeries>& series, ChartKind kind,
                       const ChartOptions& options = {});

void render_svg_chart(const std::vector<ChartSeries>& series, ChartKind kind,
                      const std::filesystem::path& path, const ChartOptions& options = {});

/// Tick positions inside [lo, hi] on a 1-2-5 step, about `target` of them.
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

}  // namespace rmteq::io
