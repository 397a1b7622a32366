// SPDX-License-Identifier: Apache-2.0
#include "fiedler/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fiedler/losses.hpp"
#include "fiedler/spectrum.hpp"

namespace fiedler {

namespace {

using Wide = long double;
using WideRows = std::vector<std::vector<Wide>>;

// Plain-loop forward pass and loss, written independently of the Eigen
// path in model.cpp. Evaluating the reference in extended precision keeps
// finite-difference round-off (~ulp(loss) / epsilon) well below the
// gradient magnitudes being checked.
class ReferenceModel {
 public:
  ReferenceModel(const ModelParams& p, const Graph& g) : p_(p), g_(g), h_(p.hidden_size) {}

  Wide loss(int rounds, ReadoutMode mode, Wide target) const {
    const int n = g_.num_nodes();
    WideRows state(static_cast<std::size_t>(n), std::vector<Wide>(h_, 0.0L));
    for (auto& row : state) row[0] = 1.0L;

    for (int t = 0; t < rounds; ++t) {
      WideRows sent(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v) sent[idx(v)] = matvec(p_.message, state[idx(v)]);
      WideRows next(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v) {
        std::vector<Wide> m(h_, 0.0L);
        for (int w : g_.neighbors(v))
          for (std::size_t k = 0; k < h_; ++k) m[k] += sent[idx(w)][k];
        next[idx(v)] = gru(state[idx(v)], m);
      }
      state = std::move(next);
    }

    const auto& ro = p_.readout(mode);
    if (mode == ReadoutMode::global) {
      std::vector<Wide> pooled(h_, 0.0L);
      for (const auto& row : state)
        for (std::size_t k = 0; k < h_; ++k) pooled[k] += row[k];
      for (auto& x : pooled) x /= static_cast<Wide>(n);
      const Wide e = mlp(ro, pooled) - target;
      return e * e / 2.0L;
    }
    Wide sum = 0.0L;
    for (const auto& row : state) {
      const Wide e = mlp(ro, row) - target;
      sum += e * e;
    }
    return sum / (2.0L * static_cast<Wide>(n));
  }

 private:
  static std::size_t idx(int v) { return static_cast<std::size_t>(v); }

  std::vector<Wide> matvec(const Matrix& w, const std::vector<Wide>& x) const {
    std::vector<Wide> y(static_cast<std::size_t>(w.rows()), 0.0L);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j)
        y[static_cast<std::size_t>(i)] += static_cast<Wide>(w(i, j)) * x[static_cast<std::size_t>(j)];
    return y;
  }

  std::vector<Wide> gru(const std::vector<Wide>& h, const std::vector<Wide>& m) const {
    const auto& q = p_.gru;
    const auto zi = matvec(q.update_input, m), zh = matvec(q.update_recurrent, h);
    const auto ri = matvec(q.reset_input, m), rh = matvec(q.reset_recurrent, h);
    std::vector<Wide> z(h_), r(h_), gated(h_);
    for (std::size_t k = 0; k < h_; ++k) {
      const auto e = static_cast<Eigen::Index>(k);
      z[k] = 1.0L / (1.0L + std::exp(-(zi[k] + zh[k] + static_cast<Wide>(q.update_bias(e)))));
      r[k] = 1.0L / (1.0L + std::exp(-(ri[k] + rh[k] + static_cast<Wide>(q.reset_bias(e)))));
      gated[k] = r[k] * h[k];
    }
    const auto ci = matvec(q.candidate_input, m), ch = matvec(q.candidate_recurrent, gated);
    std::vector<Wide> out(h_);
    for (std::size_t k = 0; k < h_; ++k) {
      const auto e = static_cast<Eigen::Index>(k);
      const Wide c = std::tanh(ci[k] + ch[k] + static_cast<Wide>(q.candidate_bias(e)));
      out[k] = (1.0L - z[k]) * h[k] + z[k] * c;
    }
    return out;
  }

  Wide mlp(const ReadoutWeights& r, const std::vector<Wide>& x) const {
    const auto pre = matvec(r.hidden_weight, x);
    Wide y = static_cast<Wide>(r.output_bias);
    for (std::size_t k = 0; k < h_; ++k) {
      const Wide a = pre[k] + static_cast<Wide>(r.hidden_bias(static_cast<Eigen::Index>(k)));
      if (a > 0.0L) y += static_cast<Wide>(r.output_weight(static_cast<Eigen::Index>(k))) * a;
    }
    return y;
  }

  const ModelParams& p_;
  const Graph& g_;
  std::size_t h_;
};

}  // namespace

GradCheckReport grad_check(const ModelParams& params, const Graph& g, int rounds,
                           ReadoutMode mode, const GradCheckOptions& opts) {
  if (!(opts.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double target = opts.target ? *opts.target : algebraic_connectivity(g);

  const auto fwd = forward(params, g, rounds, mode);
  Gradients analytic = backward(params, g, fwd.cache, target).gradients;
  if (opts.tamper) opts.tamper(analytic);

  ModelParams probe = params;
  const ReferenceModel reference(probe, g);
  auto probe_tensors = tensors(probe);
  const auto analytic_tensors = tensors(std::as_const(analytic));

  GradCheckReport report;
  for (std::size_t t = 0; t < probe_tensors.size(); ++t) {
    auto values = probe_tensors[t].values;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double saved = values[k];
      values[k] = saved + opts.epsilon;
      const Wide plus_step = static_cast<Wide>(values[k]) - saved;
      const Wide plus = reference.loss(rounds, mode, target);
      values[k] = saved - opts.epsilon;
      const Wide minus_step = saved - static_cast<Wide>(values[k]);
      const Wide minus = reference.loss(rounds, mode, target);
      values[k] = saved;

      // Divide by the step actually taken after rounding theta +- eps to double.
      const double numeric = static_cast<double>((plus - minus) / (plus_step + minus_step));
      const double exact = analytic_tensors[t].values[k];
      const double rel =
          std::abs(exact - numeric) / std::max(1e-8, std::abs(exact) + std::abs(numeric));
      ++report.coordinates;
      if (rel > report.max_relative_error) {
        report.max_relative_error = rel;
        report.worst_tensor = std::string(probe_tensors[t].name);
        report.worst_index = k;
        report.worst_analytic = exact;
        report.worst_numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace fiedler
