#ifndef AMI_CSV_HPP
#define AMI_CSV_HPP

// Small formatting helpers shared by the CSV/report writers. Output
// must be byte-identical across invocations, so all floating-point
// formatting goes through pinned printf formats.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace ami {

// Compact general format, enough digits to identify the value.
inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Fixed-precision format for aligned report columns.
inline std::string fmt_f(double v, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // keep LF line endings
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace ami

#endif
