#include "rmteq/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rmteq/errors.hpp"
#include "rmteq/io/format.hpp"

namespace rmteq::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Data rows of a CSV file whose header must equal `header`.
std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path,
                                                std::string_view header, std::size_t columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw IoError(path.string() + ": unexpected header '" + line + "'");
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != columns) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(columns) + " columns");
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

double parse_real(const std::string& s, const std::filesystem::path& path) {
  if (s == "nan") return NAN;
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double x = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw IoError(path.string() + ": invalid real '" + s + "'");
  }
  return x;
}

template <typename Int>
Int parse_int(const std::string& s, const std::filesystem::path& path) {
  Int x{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw IoError(path.string() + ": invalid integer '" + s + "'");
  }
  return x;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::string_view header) : path_(path) {
    out_ << header << '\n';
  }
  std::ostringstream& stream() { return out_; }
  void commit() { write_text_file(path_, out_.str()); }

 private:
  std::filesystem::path path_;
  std::ostringstream out_;
};

}  // namespace

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw IoError(path.string() + ": write failed");
}

std::string read_csv_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void write_records_csv(const std::vector<SampleRecord>& records, const std::filesystem::path& path) {
  CsvWriter w(path, kRecordsHeader);
  auto& o = w.stream();
  for (const auto& r : records) {
    const int status = r.rejected_degenerate ? 2 : (r.censored ? 1 : 0);
    o << r.num_spins << ',' << r.n << ',' << r.index << ',' << r.seed << ','
      << format_real(r.sigma_g_sq) << ',' << (r.t_fc ? format_real(*r.t_fc) : "nan") << ','
      << status << ',' << format_real(r.d_eff) << ',' << format_real(r.g2_inf) << ','
      << format_real(r.bound_fraction) << '\n';
  }
  w.commit();
}

std::vector<SampleRecord> read_records_csv(const std::filesystem::path& path) {
  std::vector<SampleRecord> out;
  for (const auto& c : read_rows(path, kRecordsHeader, 10)) {
    SampleRecord r;
    r.num_spins = parse_int<int>(c[0], path);
    r.n = parse_int<std::size_t>(c[1], path);
    r.index = parse_int<std::uint64_t>(c[2], path);
    r.seed = parse_int<std::uint64_t>(c[3], path);
    r.sigma_g_sq = parse_real(c[4], path);
    const double t = parse_real(c[5], path);
    if (!std::isnan(t)) r.t_fc = t;
    const int status = parse_int<int>(c[6], path);
    if (status < 0 || status > 2) throw IoError(path.string() + ": invalid censored flag");
    r.censored = status == 1;
    r.rejected_degenerate = status == 2;
    r.d_eff = parse_real(c[7], path);
    r.g2_inf = parse_real(c[8], path);
    r.bound_fraction = parse_real(c[9], path);
    out.push_back(r);
  }
  return out;
}

void write_trace_csv(const SignalTrace& trace, const std::filesystem::path& path) {
  CsvWriter w(path, kTraceHeader);
  auto& o = w.stream();
  for (std::size_t k = 0; k < trace.size(); ++k) {
    o << format_real(trace.times[k]) << ',' << format_real(trace.values[k]) << ','
      << format_real(trace.sq_values[k]) << '\n';
  }
  w.commit();
}

SignalTrace read_trace_csv(const std::filesystem::path& path) {
  SignalTrace t;
  for (const auto& c : read_rows(path, kTraceHeader, 3)) {
    t.times.push_back(parse_real(c[0], path));
    t.values.push_back(parse_real(c[1], path));
    t.sq_values.push_back(parse_real(c[2], path));
  }
  return t;
}

void write_histogram_csv(const Histogram& hist, const std::filesystem::path& path) {
  CsvWriter w(path, kHistogramHeader);
  auto& o = w.stream();
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    o << format_real(hist.edges[i]) << ',' << format_real(hist.edges[i + 1]) << ','
      << format_real(hist.densities[i]) << '\n';
  }
  w.commit();
}

Histogram read_histogram_csv(const std::filesystem::path& path) {
  Histogram h;
  const auto rows = read_rows(path, kHistogramHeader, 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double lo = parse_real(rows[i][0], path);
    if (i == 0) h.edges.push_back(lo);
    else if (lo != h.edges.back()) throw IoError(path.string() + ": histogram bins are not contiguous");
    h.edges.push_back(parse_real(rows[i][1], path));
    h.densities.push_back(parse_real(rows[i][2], path));
  }
  return h;
}

void write_spectrum_csv(const Eigen::VectorXd& energies, const std::filesystem::path& path) {
  CsvWriter w(path, kSpectrumHeader);
  auto& o = w.stream();
  for (Eigen::Index k = 0; k < energies.size(); ++k) o << k << ',' << format_real(energies(k)) << '\n';
  w.commit();
}

}  // namespace rmteq::io
