// SPDX-License-Identifier: Apache-2.0
#include "fiedler/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fiedler/losses.hpp"
#include "fiedler/rng.hpp"

namespace fiedler {

std::string_view to_string(ReadoutMode mode) {
  return mode == ReadoutMode::local ? "local" : "global";
}

ReadoutMode parse_readout_mode(std::string_view text) {
  if (text == "local") return ReadoutMode::local;
  if (text == "global") return ReadoutMode::global;
  throw std::invalid_argument("readout mode must be 'local' or 'global', got '" +
                              std::string(text) + "'");
}

namespace {

template <class Params, class Fn>
void visit_tensors(Params& p, Fn&& fn) {
  auto mat = [&](std::string_view name, auto& m) {
    fn(name, m.rows(), m.cols(), m.data(), static_cast<std::size_t>(m.size()));
  };
  auto vec = [&](std::string_view name, auto& v) {
    fn(name, v.size(), Eigen::Index{1}, v.data(), static_cast<std::size_t>(v.size()));
  };
  auto readout = [&](std::string_view w1, std::string_view b1, std::string_view w2,
                     std::string_view b2, auto& r) {
    mat(w1, r.hidden_weight);
    vec(b1, r.hidden_bias);
    vec(w2, r.output_weight);
    fn(b2, Eigen::Index{1}, Eigen::Index{1}, &r.output_bias, std::size_t{1});
  };
  mat("message", p.message);
  mat("gru.update_input", p.gru.update_input);
  mat("gru.update_recurrent", p.gru.update_recurrent);
  vec("gru.update_bias", p.gru.update_bias);
  mat("gru.reset_input", p.gru.reset_input);
  mat("gru.reset_recurrent", p.gru.reset_recurrent);
  vec("gru.reset_bias", p.gru.reset_bias);
  mat("gru.candidate_input", p.gru.candidate_input);
  mat("gru.candidate_recurrent", p.gru.candidate_recurrent);
  vec("gru.candidate_bias", p.gru.candidate_bias);
  readout("local_readout.hidden_weight", "local_readout.hidden_bias",
          "local_readout.output_weight", "local_readout.output_bias", p.local_readout);
  readout("global_readout.hidden_weight", "global_readout.hidden_bias",
          "global_readout.output_weight", "global_readout.output_bias", p.global_readout);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw std::invalid_argument(std::string(what) + " has shape " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()) + ", expected " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
}

// relu(x W1^T + b1) w2 + b2, row by row. Keeps the pre-activation.
Vector readout_rows(const ReadoutWeights& r, const Matrix& inputs, Matrix& preactivation) {
  preactivation.noalias() = inputs * r.hidden_weight.transpose();
  preactivation.rowwise() += r.hidden_bias.transpose();
  Vector out(inputs.rows());
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    double y = r.output_bias;
    for (Eigen::Index k = 0; k < preactivation.cols(); ++k) {
      const double a = preactivation(i, k);
      if (a > 0.0) y += r.output_weight(k) * a;
    }
    out(i) = y;
  }
  return out;
}

Matrix mean_row(const Matrix& rows) {
  Matrix pooled = rows.row(0);
  for (Eigen::Index v = 1; v < rows.rows(); ++v) pooled += rows.row(v);
  pooled /= static_cast<double>(rows.rows());
  return pooled;
}

// Backprop through readout_rows. `upstream(i)` is dLoss/dOutput_i.
// Returns dLoss/dInputs and accumulates into `grad`.
Matrix readout_rows_backward(const ReadoutWeights& r, const Matrix& inputs,
                             const Matrix& preactivation, const Vector& upstream,
                             ReadoutWeights& grad) {
  const Eigen::Index rows = inputs.rows();
  const Eigen::Index hidden = preactivation.cols();
  Matrix d_pre = Matrix::Zero(rows, hidden);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double dy = upstream(i);
    grad.output_bias += dy;
    for (Eigen::Index k = 0; k < hidden; ++k) {
      const double a = preactivation(i, k);
      if (a > 0.0) {
        grad.output_weight(k) += dy * a;
        d_pre(i, k) = dy * r.output_weight(k);
      }
    }
  }
  grad.hidden_weight.noalias() += d_pre.transpose() * inputs;
  grad.hidden_bias += d_pre.colwise().sum().transpose();
  return d_pre * r.hidden_weight;
}

}  // namespace

ModelParams ModelParams::zeros(int hidden) {
  if (hidden < 1) throw std::invalid_argument("hidden size must be >= 1");
  const Eigen::Index h = hidden;
  ModelParams p;
  p.hidden_size = hidden;
  p.message = Matrix::Zero(h, h);
  for (Matrix* m : {&p.gru.update_input, &p.gru.update_recurrent, &p.gru.reset_input,
                    &p.gru.reset_recurrent, &p.gru.candidate_input, &p.gru.candidate_recurrent}) {
    *m = Matrix::Zero(h, h);
  }
  for (Vector* v : {&p.gru.update_bias, &p.gru.reset_bias, &p.gru.candidate_bias}) {
    *v = Vector::Zero(h);
  }
  for (ReadoutWeights* r : {&p.local_readout, &p.global_readout}) {
    r->hidden_weight = Matrix::Zero(h, h);
    r->hidden_bias = Vector::Zero(h);
    r->output_weight = Vector::Zero(h);
    r->output_bias = 0.0;
  }
  return p;
}

bool ModelParams::operator==(const ModelParams& other) const {
  if (hidden_size != other.hidden_size) return false;
  const auto a = tensors(*this);
  const auto b = tensors(other);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows != b[i].rows || a[i].cols != b[i].cols) return false;
    for (std::size_t k = 0; k < a[i].values.size(); ++k)
      if (a[i].values[k] != b[i].values[k]) return false;
  }
  return true;
}

std::vector<TensorRef> tensors(ModelParams& params) {
  std::vector<TensorRef> out;
  visit_tensors(params, [&](std::string_view name, Eigen::Index r, Eigen::Index c, double* data,
                            std::size_t size) { out.push_back({name, r, c, {data, size}}); });
  return out;
}

std::vector<ConstTensorRef> tensors(const ModelParams& params) {
  std::vector<ConstTensorRef> out;
  visit_tensors(params, [&](std::string_view name, Eigen::Index r, Eigen::Index c,
                            const double* data, std::size_t size) {
    out.push_back({name, r, c, {data, size}});
  });
  return out;
}

std::size_t parameter_count(const ModelParams& params) {
  std::size_t total = 0;
  for (const auto& t : tensors(params)) total += t.values.size();
  return total;
}

bool all_finite(const ModelParams& params) {
  for (const auto& t : tensors(params))
    for (double x : t.values)
      if (!std::isfinite(x)) return false;
  return true;
}

void add_scaled(ModelParams& acc, const ModelParams& other, double scale) {
  auto dst = tensors(acc);
  const auto src = tensors(other);
  if (dst.size() != src.size()) throw std::invalid_argument("parameter sets differ in layout");
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (dst[i].values.size() != src[i].values.size()) {
      throw std::invalid_argument("shape mismatch in tensor " + std::string(dst[i].name));
    }
    for (std::size_t k = 0; k < dst[i].values.size(); ++k)
      dst[i].values[k] += scale * src[i].values[k];
  }
}

ModelParams init_params(int hidden, std::uint64_t seed) {
  ModelParams p = ModelParams::zeros(hidden);
  Rng rng(seed);
  for (auto& t : tensors(p)) {
    // Biases (including the scalar output bias) stay zero; the readout
    // output weight is an H -> 1 map.
    const bool matrix = t.cols > 1;
    const bool output_weight = t.name.ends_with("output_weight");
    if (!matrix && !output_weight) continue;
    const double fan_in = static_cast<double>(matrix ? t.cols : t.rows);
    const double fan_out = static_cast<double>(matrix ? t.rows : 1);
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& x : t.values) x = rng.uniform(-bound, bound);
  }
  return p;
}

Matrix initial_state(int num_nodes, int hidden) {
  Matrix h = Matrix::Zero(num_nodes, hidden);
  h.col(0).setOnes();
  return h;
}

Matrix sum_over_neighbors(const Graph& g, const Matrix& rows) {
  Matrix out = Matrix::Zero(rows.rows(), rows.cols());
  for (int v = 0; v < g.num_nodes(); ++v)
    for (int w : g.neighbors(v)) out.row(v) += rows.row(w);
  return out;
}

Matrix message_step(const ModelParams& params, const Graph& g, const Matrix& states) {
  require_shape(states, g.num_nodes(), params.hidden_size, "state matrix");
  const Matrix outgoing = states * params.message.transpose();
  return sum_over_neighbors(g, outgoing);
}

GruActivations gru_forward(const GruWeights& gru, const Matrix& states, const Matrix& messages) {
  if (states.rows() != messages.rows() || states.cols() != messages.cols()) {
    throw std::invalid_argument("state and message matrices differ in shape");
  }
  GruActivations act;
  act.update_gate.noalias() = messages * gru.update_input.transpose();
  act.update_gate.noalias() += states * gru.update_recurrent.transpose();
  act.update_gate.rowwise() += gru.update_bias.transpose();
  act.update_gate = act.update_gate.unaryExpr(&sigmoid);

  act.reset_gate.noalias() = messages * gru.reset_input.transpose();
  act.reset_gate.noalias() += states * gru.reset_recurrent.transpose();
  act.reset_gate.rowwise() += gru.reset_bias.transpose();
  act.reset_gate = act.reset_gate.unaryExpr(&sigmoid);

  act.gated_state = act.reset_gate.cwiseProduct(states);
  act.candidate.noalias() = messages * gru.candidate_input.transpose();
  act.candidate.noalias() += act.gated_state * gru.candidate_recurrent.transpose();
  act.candidate.rowwise() += gru.candidate_bias.transpose();
  act.candidate = act.candidate.array().tanh().matrix();

  act.next_state = states + act.update_gate.cwiseProduct(act.candidate - states);
  return act;
}

Matrix gru_update(const ModelParams& params, const Matrix& states, const Matrix& messages) {
  return gru_forward(params.gru, states, messages).next_state;
}

double readout_local(const ModelParams& params, const Vector& state) {
  Matrix pre;
  return readout_rows(params.local_readout, state.transpose(), pre)(0);
}

double readout_global(const ModelParams& params, const Matrix& final_states) {
  if (final_states.rows() < 1) throw std::invalid_argument("global readout needs >= 1 node");
  Matrix pre;
  return readout_rows(params.global_readout, mean_row(final_states), pre)(0);
}

ForwardResult forward(const ModelParams& params, const Graph& g, int rounds, ReadoutMode mode) {
  if (rounds < 1) throw std::invalid_argument("message-passing rounds must be >= 1");
  ForwardResult result;
  ForwardCache& cache = result.cache;
  cache.mode = mode;
  cache.num_nodes = g.num_nodes();
  cache.hidden_size = params.hidden_size;
  cache.states.reserve(static_cast<std::size_t>(rounds) + 1);
  cache.steps.reserve(static_cast<std::size_t>(rounds));
  cache.states.push_back(initial_state(g.num_nodes(), params.hidden_size));

  for (int t = 0; t < rounds; ++t) {
    const Matrix& current = cache.states.back();
    StepCache step;
    step.messages = message_step(params, g, current);
    GruActivations act = gru_forward(params.gru, current, step.messages);
    step.update_gate = std::move(act.update_gate);
    step.reset_gate = std::move(act.reset_gate);
    step.candidate = std::move(act.candidate);
    step.gated_state = std::move(act.gated_state);
    cache.steps.push_back(std::move(step));
    cache.states.push_back(std::move(act.next_state));
  }

  cache.readout_input = mode == ReadoutMode::local ? cache.states.back()
                                                   : mean_row(cache.states.back());
  cache.outputs = readout_rows(params.readout(mode), cache.readout_input,
                               cache.readout_preactivation);
  result.estimate.mode = mode;
  result.estimate.values.assign(cache.outputs.data(), cache.outputs.data() + cache.outputs.size());
  return result;
}

Estimate predict(const ModelParams& params, const Graph& g, int rounds, ReadoutMode mode) {
  return forward(params, g, rounds, mode).estimate;
}

BackwardResult backward(const ModelParams& params, const Graph& g, const ForwardCache& cache,
                        double target) {
  if (cache.num_nodes != g.num_nodes() || cache.hidden_size != params.hidden_size ||
      cache.states.size() != cache.steps.size() + 1 || cache.steps.empty()) {
    throw std::invalid_argument("forward cache does not match graph or parameters");
  }
  const Eigen::Index n = cache.num_nodes;
  const auto count = cache.outputs.size();

  BackwardResult result;
  result.loss = l2_loss({cache.outputs.data(), static_cast<std::size_t>(count)}, target);
  Gradients& grad = result.gradients;
  grad = ModelParams::zeros(params.hidden_size);

  // dL/dy_i = (y_i - target) / k for L = (1 / 2k) sum (y_i - target)^2.
  const Vector upstream = (cache.outputs.array() - target) / static_cast<double>(count);
  ReadoutWeights& readout_grad =
      cache.mode == ReadoutMode::local ? grad.local_readout : grad.global_readout;
  Matrix d_readout_input = readout_rows_backward(params.readout(cache.mode), cache.readout_input,
                                                 cache.readout_preactivation, upstream,
                                                 readout_grad);

  Matrix d_state;
  if (cache.mode == ReadoutMode::local) {
    d_state = std::move(d_readout_input);
  } else {
    d_state = d_readout_input.replicate(n, 1) / static_cast<double>(n);
  }

  const GruWeights& gru = params.gru;
  GruWeights& dgru = grad.gru;
  for (int t = cache.rounds() - 1; t >= 0; --t) {
    const StepCache& step = cache.steps[static_cast<std::size_t>(t)];
    const Matrix& prev = cache.states[static_cast<std::size_t>(t)];
    const Matrix& z = step.update_gate;
    const Matrix& r = step.reset_gate;
    const Matrix& c = step.candidate;
    const Matrix& m = step.messages;

    // h' = h + z * (c - h)
    const Matrix d_z = d_state.cwiseProduct(c - prev);
    const Matrix d_c = d_state.cwiseProduct(z);
    Matrix d_prev = d_state - d_state.cwiseProduct(z);

    const Matrix d_cand_pre =
        d_c.cwiseProduct((1.0 - c.array().square()).matrix());
    dgru.candidate_input.noalias() += d_cand_pre.transpose() * m;
    dgru.candidate_recurrent.noalias() += d_cand_pre.transpose() * step.gated_state;
    dgru.candidate_bias += d_cand_pre.colwise().sum().transpose();
    Matrix d_messages = d_cand_pre * gru.candidate_input;
    const Matrix d_gated = d_cand_pre * gru.candidate_recurrent;

    const Matrix d_r = d_gated.cwiseProduct(prev);
    d_prev += d_gated.cwiseProduct(r);

    const Matrix d_reset_pre = d_r.cwiseProduct((r.array() * (1.0 - r.array())).matrix());
    dgru.reset_input.noalias() += d_reset_pre.transpose() * m;
    dgru.reset_recurrent.noalias() += d_reset_pre.transpose() * prev;
    dgru.reset_bias += d_reset_pre.colwise().sum().transpose();
    d_messages.noalias() += d_reset_pre * gru.reset_input;
    d_prev.noalias() += d_reset_pre * gru.reset_recurrent;

    const Matrix d_update_pre = d_z.cwiseProduct((z.array() * (1.0 - z.array())).matrix());
    dgru.update_input.noalias() += d_update_pre.transpose() * m;
    dgru.update_recurrent.noalias() += d_update_pre.transpose() * prev;
    dgru.update_bias += d_update_pre.colwise().sum().transpose();
    d_messages.noalias() += d_update_pre * gru.update_input;
    d_prev.noalias() += d_update_pre * gru.update_recurrent;

    // messages = A (prev W^T); A is symmetric, so the adjoint is another
    // neighbor sum.
    const Matrix d_outgoing = sum_over_neighbors(g, d_messages);
    grad.message.noalias() += d_outgoing.transpose() * prev;
    d_prev.noalias() += d_outgoing * params.message;

    d_state = std::move(d_prev);
  }
  return result;
}

}  // namespace fiedler
