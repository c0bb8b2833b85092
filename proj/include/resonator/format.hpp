#pragma once

// Deterministic number formatting shared by every CLI output path. All floats
// go through num() at 17 significant digits so identical runs are
// byte-identical and every double round-trips exactly.

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

namespace resonator::fmtio {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string num(long v) { return std::to_string(v); }

inline std::string num(int v) { return std::to_string(v); }

// JSON value for one numeric cell; infinities and NaN are not JSON numbers,
// so they become strings with the same spelling the CSV writer uses.
inline std::string json_number(double v) {
  if (std::isfinite(v)) return num(v);
  return "\"" + num(v) + "\"";
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace resonator::fmtio
