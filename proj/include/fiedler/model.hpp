// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fiedler/graph.hpp"

namespace fiedler {

/// Node-state matrices are n x H, one row per node.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Which readout produces the estimate: one value per node, or one pooled
/// value for the whole graph.
enum class ReadoutMode { local, global };

std::string_view to_string(ReadoutMode mode);
/// Accepts "local" or "global"; throws std::invalid_argument otherwise.
ReadoutMode parse_readout_mode(std::string_view text);

/// z = sigmoid(W_z m + U_z h + b_z), r likewise, c = tanh(W_c m + U_c (r*h) + b_c),
/// h' = (1 - z) * h + z * c.
struct GruWeights {
  Matrix update_input;
  Matrix update_recurrent;
  Vector update_bias;
  Matrix reset_input;
  Matrix reset_recurrent;
  Vector reset_bias;
  Matrix candidate_input;
  Matrix candidate_recurrent;
  Vector candidate_bias;
};

/// Single-hidden-layer MLP: output_weight . relu(hidden_weight x + hidden_bias) + output_bias.
struct ReadoutWeights {
  Matrix hidden_weight;
  Vector hidden_bias;
  Vector output_weight;
  double output_bias = 0.0;
};

/// Every learnable weight of the network. Weights are shared across all
/// message-passing rounds.
struct ModelParams {
  int hidden_size = 0;
  Matrix message;  // applied to the sender state, no bias
  GruWeights gru;
  ReadoutWeights local_readout;
  ReadoutWeights global_readout;

  /// All-zero parameters of hidden size `hidden`.
  static ModelParams zeros(int hidden);

  const ReadoutWeights& readout(ReadoutMode mode) const {
    return mode == ReadoutMode::local ? local_readout : global_readout;
  }

  bool operator==(const ModelParams& other) const;
};

/// Same shape as ModelParams; holds d(loss)/d(param).
using Gradients = ModelParams;

/// A named, shaped, contiguous view of one tensor inside ModelParams.
/// Vectors have cols == 1 and the scalar output bias is 1 x 1.
template <class T>
struct BasicTensorRef {
  std::string_view name;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::span<T> values;
};
using TensorRef = BasicTensorRef<double>;
using ConstTensorRef = BasicTensorRef<const double>;

/// Tensors in canonical order (the checkpoint order).
std::vector<TensorRef> tensors(ModelParams& params);
std::vector<ConstTensorRef> tensors(const ModelParams& params);

std::size_t parameter_count(const ModelParams& params);
bool all_finite(const ModelParams& params);
/// acc += scale * other, tensor by tensor. Shapes must match.
void add_scaled(ModelParams& acc, const ModelParams& other, double scale);

/// Glorot-uniform matrices (bound sqrt(6 / (fan_in + fan_out))), zero biases.
ModelParams init_params(int hidden, std::uint64_t seed);

/// Every node starts in state e1 = (1, 0, ..., 0).
Matrix initial_state(int num_nodes, int hidden);

/// Row v is the sum, over neighbors w in ascending order, of message * h_w.
Matrix message_step(const ModelParams& params, const Graph& g, const Matrix& states);

/// Row v is the sum of rows[w] over neighbors w of v, ascending w.
Matrix sum_over_neighbors(const Graph& g, const Matrix& rows);

struct GruActivations {
  Matrix update_gate;
  Matrix reset_gate;
  Matrix candidate;
  Matrix gated_state;  // reset_gate * previous state
  Matrix next_state;
};

/// Row-wise GRU on (states, messages); keeps the gate activations.
GruActivations gru_forward(const GruWeights& gru, const Matrix& states, const Matrix& messages);
Matrix gru_update(const ModelParams& params, const Matrix& states, const Matrix& messages);

double readout_local(const ModelParams& params, const Vector& state);
/// Mean-pools the rows (ascending node order) then applies the global MLP.
double readout_global(const ModelParams& params, const Matrix& final_states);

/// Per-node estimates (local) or a single pooled estimate (global).
struct Estimate {
  ReadoutMode mode = ReadoutMode::local;
  std::vector<double> values;
};

struct StepCache {
  Matrix messages;
  Matrix update_gate;
  Matrix reset_gate;
  Matrix candidate;
  Matrix gated_state;
};

/// Everything backward() needs from one forward pass.
struct ForwardCache {
  ReadoutMode mode = ReadoutMode::local;
  int num_nodes = 0;
  int hidden_size = 0;
  std::vector<Matrix> states;    // rounds + 1 entries; states[0] is the initial state
  std::vector<StepCache> steps;  // one per round
  Matrix readout_input;          // final states (local) or the pooled mean row (global)
  Matrix readout_preactivation;  // readout_input * W1^T + b1
  Vector outputs;

  int rounds() const { return static_cast<int>(steps.size()); }
};

struct ForwardResult {
  Estimate estimate;
  ForwardCache cache;
};

/// Runs `rounds` message-passing rounds from initial_state, then the readout
/// selected by `mode`. Throws std::invalid_argument if rounds < 1.
ForwardResult forward(const ModelParams& params, const Graph& g, int rounds, ReadoutMode mode);

/// Same as forward() without keeping the cache.
Estimate predict(const ModelParams& params, const Graph& g, int rounds, ReadoutMode mode);

struct BackwardResult {
  double loss = 0.0;
  Gradients gradients;
};

/// Squared-error loss (1 / (2 |outputs|)) sum (y - target)^2 and its exact
/// gradient with respect to every parameter, back through all rounds.
/// Throws std::invalid_argument if the cache does not match `g` or `params`.
BackwardResult backward(const ModelParams& params, const Graph& g, const ForwardCache& cache,
                        double target);

}  // namespace fiedler
