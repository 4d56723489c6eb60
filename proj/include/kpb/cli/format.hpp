#pragma once

#include <cstdio>
#include <string>

namespace kpb::cli {

/// Round-trip exact decimal form of a double (17 significant digits).
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace kpb::cli
