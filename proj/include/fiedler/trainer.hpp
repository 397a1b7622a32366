// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fiedler/adam.hpp"
#include "fiedler/dataset.hpp"
#include "fiedler/model.hpp"

namespace fiedler {

struct TrainConfig {
  int rounds = 4;
  ReadoutMode mode = ReadoutMode::local;
  int hidden = 32;
  int epochs = 20;
  int batch_size = 256;
  AdamConfig adam;
  std::uint64_t seed = 0;
  /// Node-count range of the training data; recorded, not enforced.
  int n_min = 9;
  int n_max = 11;
  /// When false the wall_time_s column is written as 0 so that metrics are
  /// byte-reproducible.
  bool record_wall_time = false;

  /// Throws std::invalid_argument on out-of-range settings.
  void validate() const;
};

struct EpochMetrics {
  int epoch = 0;           // 1-based
  double train_l2 = 0.0;   // mean per-graph L2 seen while training this epoch
  double val_l1 = 0.0;
  double val_l2 = 0.0;
  double wall_time_s = 0.0;
};

struct EvalResult {
  double mean_l1 = 0.0;
  double mean_l2 = 0.0;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Called after every epoch with that epoch's metrics and parameters.
using EpochObserver = std::function<void(const EpochMetrics&, const ModelParams&)>;

struct TrainResult {
  ModelParams params;
  std::vector<EpochMetrics> metrics;
};

/// Mini-batch Adam on the L2 loss. Parameters come from init_params(hidden,
/// seed); the training order is reshuffled every epoch from `seed`. Batch
/// gradients are means over the batch, reduced in batch order. Throws
/// DivergenceError on a non-finite loss or parameter.
TrainResult train(const TrainConfig& cfg, const Dataset& train_set, const Dataset& val_set,
                  const EpochObserver& observer = {});

/// Same, starting from the given parameters.
TrainResult train_from(ModelParams initial, const TrainConfig& cfg, const Dataset& train_set,
                       const Dataset& val_set, const EpochObserver& observer = {});

/// Mean per-graph L1 and L2.
EvalResult evaluate(const ModelParams& params, const Dataset& data, int rounds, ReadoutMode mode);

struct SweepRow {
  int n = 0;
  double mean_l1 = 0.0;
  std::size_t count = 0;
};

/// For each size, `per_size_count` fresh graphs from `base` with the node
/// range pinned to that size, scored by mean L1.
std::vector<SweepRow> generalization_sweep(const ModelParams& params, const std::vector<int>& sizes,
                                           std::size_t per_size_count, const GraphGenConfig& base,
                                           int rounds, ReadoutMode mode);

/// epoch,train_l2,val_l1,val_l2,wall_time_s
void write_metrics_csv(std::ostream& out, const std::vector<EpochMetrics>& metrics);
/// n,mean_l1,count,in_training_range
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     std::pair<int, int> training_range);

}  // namespace fiedler
