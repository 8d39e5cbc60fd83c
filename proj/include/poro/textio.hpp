#pragma once

#include <cstdio>
#include <string>

namespace poro {

// Shortest round-trip decimal for a double.
inline std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace poro
