// SPDX-License-Identifier: Apache-2.0
#include "fiedler/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "fiedler/format.hpp"
#include "fiedler/losses.hpp"
#include "fiedler/rng.hpp"

namespace fiedler {

namespace {

// Keeps the shuffle stream apart from the init_params stream of the same seed.
constexpr std::uint64_t kShuffleStream = 0x5348'5546'0000'0000ULL;

}  // namespace

void TrainConfig::validate() const {
  if (rounds < 1) throw std::invalid_argument("T must be >= 1");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (hidden < 1) throw std::invalid_argument("hidden size must be >= 1");
  if (!(adam.learning_rate >= 0.0)) throw std::invalid_argument("learning rate must be >= 0");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw std::invalid_argument("Adam betas must lie in [0, 1)");
  }
  if (!(adam.epsilon > 0.0)) throw std::invalid_argument("Adam epsilon must be positive");
}

EvalResult evaluate(const ModelParams& params, const Dataset& data, int rounds, ReadoutMode mode) {
  if (data.empty()) throw std::invalid_argument("cannot evaluate on an empty dataset");
  double l1 = 0.0, l2 = 0.0;
  for (const auto& item : data.items) {
    const auto est = predict(params, item.graph, rounds, mode);
    l1 += l1_error(est.values, item.lambda2);
    l2 += l2_loss(est.values, item.lambda2);
  }
  const auto count = static_cast<double>(data.size());
  return {l1 / count, l2 / count};
}

TrainResult train(const TrainConfig& cfg, const Dataset& train_set, const Dataset& val_set,
                  const EpochObserver& observer) {
  cfg.validate();
  return train_from(init_params(cfg.hidden, cfg.seed), cfg, train_set, val_set, observer);
}

TrainResult train_from(ModelParams initial, const TrainConfig& cfg, const Dataset& train_set,
                       const Dataset& val_set, const EpochObserver& observer) {
  cfg.validate();
  if (train_set.empty() || val_set.empty()) {
    throw std::invalid_argument("training and validation sets must be non-empty");
  }
  if (initial.hidden_size != cfg.hidden) {
    throw std::invalid_argument("initial parameters have hidden size " +
                                std::to_string(initial.hidden_size) + ", config says " +
                                std::to_string(cfg.hidden));
  }

  TrainResult result;
  result.params = std::move(initial);
  ModelParams& params = result.params;
  AdamState adam = AdamState::zeros_like(params);
  Rng shuffle_rng(cfg.seed, kShuffleStream);

  std::vector<std::size_t> order(train_set.size());
  const auto batch = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_rng.shuffle(order);

    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += batch) {
      const std::size_t end = std::min(order.size(), begin + batch);
      const double weight = 1.0 / static_cast<double>(end - begin);
      Gradients batch_grad = ModelParams::zeros(params.hidden_size);
      for (std::size_t i = begin; i < end; ++i) {
        const auto& item = train_set.items[order[i]];
        const auto fwd = forward(params, item.graph, cfg.rounds, cfg.mode);
        const auto bwd = backward(params, item.graph, fwd.cache, item.lambda2);
        if (!std::isfinite(bwd.loss)) {
          throw DivergenceError("non-finite training loss at epoch " + std::to_string(epoch) +
                                ", item " + std::to_string(order[i]));
        }
        epoch_loss += bwd.loss;
        add_scaled(batch_grad, bwd.gradients, weight);
      }
      adam_step(params, batch_grad, adam, cfg.adam);
      if (!all_finite(params)) {
        throw DivergenceError("non-finite parameters after an optimizer step in epoch " +
                              std::to_string(epoch));
      }
    }

    const auto val = evaluate(params, val_set, cfg.rounds, cfg.mode);
    EpochMetrics m;
    m.epoch = epoch;
    m.train_l2 = epoch_loss / static_cast<double>(train_set.size());
    m.val_l1 = val.mean_l1;
    m.val_l2 = val.mean_l2;
    if (cfg.record_wall_time) {
      m.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    if (!std::isfinite(m.val_l1) || !std::isfinite(m.val_l2)) {
      throw DivergenceError("non-finite validation loss at epoch " + std::to_string(epoch));
    }
    result.metrics.push_back(m);
    if (observer) observer(m, params);
  }
  return result;
}

std::vector<SweepRow> generalization_sweep(const ModelParams& params, const std::vector<int>& sizes,
                                           std::size_t per_size_count, const GraphGenConfig& base,
                                           int rounds, ReadoutMode mode) {
  if (per_size_count < 1) throw std::invalid_argument("per-size count must be >= 1");
  std::vector<SweepRow> rows;
  rows.reserve(sizes.size());
  for (int n : sizes) {
    GraphGenConfig cfg = base;
    cfg.n_min = cfg.n_max = n;
    const auto data = generate_dataset(cfg, per_size_count);
    rows.push_back({n, evaluate(params, data, rounds, mode).mean_l1, per_size_count});
  }
  return rows;
}

void write_metrics_csv(std::ostream& out, const std::vector<EpochMetrics>& metrics) {
  out << "epoch,train_l2,val_l1,val_l2,wall_time_s\n";
  for (const auto& m : metrics) {
    out << m.epoch << ',' << format_double(m.train_l2) << ',' << format_double(m.val_l1) << ','
        << format_double(m.val_l2) << ',' << format_double(m.wall_time_s) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     std::pair<int, int> training_range) {
  out << "n,mean_l1,count,in_training_range\n";
  for (const auto& r : rows) {
    const bool inside = r.n >= training_range.first && r.n <= training_range.second;
    out << r.n << ',' << format_double(r.mean_l1) << ',' << r.count << ',' << (inside ? 1 : 0)
        << '\n';
  }
}

}  // namespace fiedler
