// SPDX-License-Identifier: Apache-2.0
#include "fiedler/format.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace fiedler {

std::string format_double(double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

double parse_double(std::string_view token) {
  const std::string s(token);
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::runtime_error("not a number: '" + s + "'");
  }
  return value;
}

}  // namespace fiedler
