// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

namespace fiedler {

/// "%.17g": enough digits for an exact round trip through parse_double.
std::string format_double(double x);

/// Strict full-token parse; throws std::runtime_error on garbage.
double parse_double(std::string_view token);

}  // namespace fiedler
