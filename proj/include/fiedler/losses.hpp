// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

namespace fiedler {

// Both losses use the normalizer 1 / (2 k) over k estimates: k = n for
// per-node estimates, k = 1 for a single pooled estimate.

/// (1 / 2k) sum_i |estimate_i - target|
double l1_error(std::span<const double> estimates, double target);

/// (1 / 2k) sum_i (estimate_i - target)^2
double l2_loss(std::span<const double> estimates, double target);

}  // namespace fiedler
