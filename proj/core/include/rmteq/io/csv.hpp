#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmteq/dephasing.hpp"
#include "rmteq/ensemble.hpp"
#include "rmteq/histogram.hpp"

namespace rmteq::io {

// CSV emission. Every file is UTF-8 with a header row; reals use
// format_real (17 significant digits). All writers throw IoError.

/// Header: L,N,index,seed,sigma_g_sq,t_fc,censored,d_eff,g2_inf,bound_fraction
/// A missing t_fc prints as nan. The censored column is 0 for a completed
/// sample, 1 for a censored one and 2 for a degenerate sample that was
/// rejected before crossing detection.
void write_records_csv(const std::vector<SampleRecord>& records, const std::filesystem::path& path);
std::vector<SampleRecord> read_records_csv(const std::filesystem::path& path);

/// Header: t,g,g_sq
void write_trace_csv(const SignalTrace& trace, const std::filesystem::path& path);
SignalTrace read_trace_csv(const std::filesystem::path& path);

/// Header: s_lo,s_hi,density. Counts are not stored; `total` reads back as 0.
void write_histogram_csv(const Histogram& hist, const std::filesystem::path& path);
Histogram read_histogram_csv(const std::filesystem::path& path);

/// Header: k,energy
void write_spectrum_csv(const Eigen::VectorXd& energies, const std::filesystem::path& path);

inline constexpr const char* kRecordsHeader =
    "L,N,index,seed,sigma_g_sq,t_fc,censored,d_eff,g2_inf,bound_fraction";
inline constexpr const char* kTraceHeader = "t,g,g_sq";
inline constexpr const char* kHistogramHeader = "s_lo,s_hi,density";
inline constexpr const char* kSpectrumHeader = "k,energy";

/// First line of a CSV file, without the line terminator.
std::string read_csv_header(const std::filesystem::path& path);

/// Writes `content` to `path` in binary mode, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace rmteq::io
