// SPDX-License-Identifier: Apache-2.0
#include "fiedler/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace fiedler {

double l1_error(std::span<const double> estimates, double target) {
  if (estimates.empty()) throw std::invalid_argument("l1_error of an empty estimate");
  double sum = 0.0;
  for (double e : estimates) sum += std::abs(e - target);
  return sum / (2.0 * static_cast<double>(estimates.size()));
}

double l2_loss(std::span<const double> estimates, double target) {
  if (estimates.empty()) throw std::invalid_argument("l2_loss of an empty estimate");
  double sum = 0.0;
  for (double e : estimates) sum += (e - target) * (e - target);
  return sum / (2.0 * static_cast<double>(estimates.size()));
}

}  // namespace fiedler
