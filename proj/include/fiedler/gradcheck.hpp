// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "fiedler/model.hpp"

namespace fiedler {

struct GradCheckOptions {
  double epsilon = 1e-5;
  /// Regression target; defaults to the graph's true algebraic connectivity.
  std::optional<double> target;
  /// Applied to the analytic gradient before comparison (detector tests).
  std::function<void(Gradients&)> tamper;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_tensor;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates = 0;
};

/// Compares backward() to central differences on every parameter coordinate:
/// |analytic - numeric| / max(1e-8, |analytic| + |numeric|), maximized.
GradCheckReport grad_check(const ModelParams& params, const Graph& g, int rounds,
                           ReadoutMode mode, const GradCheckOptions& opts = {});

}  // namespace fiedler
