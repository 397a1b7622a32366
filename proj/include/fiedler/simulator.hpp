// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "fiedler/graph.hpp"
#include "fiedler/model.hpp"

namespace fiedler {

/// One robot: its own copy of the weights, its own state, and an inbox.
/// An agent only ever sees payloads delivered to it.
class Agent {
 public:
  Agent(int id, ModelParams params);

  int id() const { return id_; }
  const Vector& state() const { return state_; }
  std::size_t inbox_size() const { return inbox_.size(); }

  /// Payload broadcast to every neighbor this round: message * state.
  Vector outgoing() const;
  void deliver(int sender, Vector payload);
  /// Sums the inbox in ascending sender order (empty inbox = zero vector),
  /// applies the GRU update and clears the inbox.
  void update();
  /// Local readout of the current state.
  double estimate() const;

 private:
  int id_;
  ModelParams params_;
  Vector state_;
  std::vector<std::pair<int, Vector>> inbox_;
};

struct MessageRecord {
  int sender = 0;
  int receiver = 0;
  Vector payload;
};

struct RoundRecord {
  int round = 0;  // 1-based
  std::vector<MessageRecord> messages;
  Matrix states_after;  // n x H, row v is agent v's state after the round
};

struct RoundTrace {
  std::vector<RoundRecord> rounds;
};

struct SimulationResult {
  std::vector<double> estimates;
  RoundTrace trace;
};

/// `rounds` lockstep rounds: every agent sends (phase 1), then every agent
/// updates from its inbox (phase 2). Agents are processed in ascending id.
SimulationResult run_simulation(const ModelParams& params, const Graph& g, int rounds);

/// As run_simulation, but the listed edges carry no messages (either
/// direction) in rounds >= from_round. Throws std::invalid_argument if an
/// edge in `drop_edges` is not in `g`.
SimulationResult run_simulation_with_drop(const ModelParams& params, const Graph& g, int rounds,
                                          std::span<const Edge> drop_edges, int from_round);

/// round,sender,receiver,p0,...,p{H-1}
void write_trace_csv(std::ostream& out, const RoundTrace& trace);

/// Per-node estimates next to the true algebraic connectivity.
struct EstimateReport {
  double lambda2 = 0.0;
  std::vector<double> estimates;

  double abs_error(std::size_t node) const;
};

/// Runs the distributed simulation on `g` and pairs it with the eigensolver
/// value.
EstimateReport demo_figure1(const ModelParams& params, const Graph& g, int rounds);

/// node,estimate,abs_error with a leading "true" row holding lambda2.
void write_report_csv(std::ostream& out, const EstimateReport& report);
/// Human-readable summary; lambda2 to two decimals.
void render_report(std::ostream& out, const EstimateReport& report);

}  // namespace fiedler
