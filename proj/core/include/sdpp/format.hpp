#pragma once

#include <cstdio>
#include <string>

namespace sdpp {

/// Shortest-safe round-trip formatting: 17 significant digits.
inline std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

/// Compact formatting for human-facing diagnostics.
inline std::string format_short(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

}  // namespace sdpp
