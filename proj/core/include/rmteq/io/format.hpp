#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace rmteq::io {

/// 17 significant digits ("%.17g"), which round-trips every double.
/// Non-finite values print as nan, inf, -inf.
inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// format_real, forced to look like a TOML float.
inline std::string format_toml_real(double x) {
  std::string s = format_real(x);
  if (std::isfinite(x) && s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

}  // namespace rmteq::io
