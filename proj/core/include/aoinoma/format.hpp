#pragma once

#include <cstdio>
#include <string>

namespace aoinoma {

/// Round-trip-exact decimal text for a double; used everywhere a double
/// lands in a file so artifacts are byte-reproducible.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Fixed two-decimal form for SVG coordinates.
inline std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace aoinoma
