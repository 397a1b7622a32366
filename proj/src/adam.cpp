// SPDX-License-Identifier: Apache-2.0
#include "fiedler/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace fiedler {

AdamState AdamState::zeros_like(const ModelParams& params) {
  return {ModelParams::zeros(params.hidden_size), ModelParams::zeros(params.hidden_size), 0};
}

void adam_step(ModelParams& params, const Gradients& grads, AdamState& state,
               const AdamConfig& cfg) {
  auto theta = tensors(params);
  const auto g = tensors(grads);
  auto m = tensors(state.first_moment);
  auto v = tensors(state.second_moment);
  if (g.size() != theta.size() || m.size() != theta.size() || v.size() != theta.size()) {
    throw std::invalid_argument("optimizer tensors do not match parameter layout");
  }
  for (std::size_t t = 0; t < theta.size(); ++t) {
    const auto size = theta[t].values.size();
    if (g[t].values.size() != size || m[t].values.size() != size || v[t].values.size() != size) {
      throw std::invalid_argument("optimizer shape mismatch in " + std::string(theta[t].name));
    }
  }

  ++state.step;
  const double step = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, step);
  const double correction2 = 1.0 - std::pow(cfg.beta2, step);
  for (std::size_t t = 0; t < theta.size(); ++t) {
    for (std::size_t k = 0; k < theta[t].values.size(); ++k) {
      const double grad = g[t].values[k];
      double& mk = m[t].values[k];
      double& vk = v[t].values[k];
      mk = cfg.beta1 * mk + (1.0 - cfg.beta1) * grad;
      vk = cfg.beta2 * vk + (1.0 - cfg.beta2) * grad * grad;
      const double m_hat = mk / correction1;
      const double v_hat = vk / correction2;
      theta[t].values[k] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
  }
}

}  // namespace fiedler
