#pragma once

#include <cstdio>
#include <string>

namespace ddsplit {

// Round-trippable decimal text for CSV output.
inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace ddsplit
