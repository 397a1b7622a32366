// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "fiedler/model.hpp"

namespace fiedler {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment accumulators shaped like the parameters.
struct AdamState {
  ModelParams first_moment;
  ModelParams second_moment;
  std::int64_t step = 0;

  static AdamState zeros_like(const ModelParams& params);
};

/// One bias-corrected Adam update of `params` in place. Throws
/// std::invalid_argument when shapes disagree.
void adam_step(ModelParams& params, const Gradients& grads, AdamState& state,
               const AdamConfig& cfg);

}  // namespace fiedler
