#pragma once

#include <cstdio>
#include <string>

namespace emden {

/// printf-style %.<digits>g
inline std::string fmt(double v, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace emden
