// SPDX-License-Identifier: Apache-2.0
#include "fiedler/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fiedler/format.hpp"
#include "fiedler/spectrum.hpp"

namespace fiedler {

Agent::Agent(int id, ModelParams params)
    : id_(id), params_(std::move(params)), state_(Vector::Zero(params_.hidden_size)) {
  state_(0) = 1.0;
}

Vector Agent::outgoing() const { return params_.message * state_; }

void Agent::deliver(int sender, Vector payload) {
  if (payload.size() != params_.hidden_size) {
    throw std::invalid_argument("payload size does not match hidden size");
  }
  inbox_.emplace_back(sender, std::move(payload));
}

void Agent::update() {
  std::stable_sort(inbox_.begin(), inbox_.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Matrix message = Matrix::Zero(1, params_.hidden_size);
  for (const auto& [sender, payload] : inbox_) message += payload.transpose();
  inbox_.clear();
  const Matrix next = gru_update(params_, state_.transpose(), message);
  state_ = next.row(0).transpose();
}

double Agent::estimate() const { return readout_local(params_, state_); }

namespace {

std::vector<Edge> normalized(std::span<const Edge> edges, const Graph& g) {
  std::vector<Edge> out;
  for (Edge e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= g.num_nodes() || !g.has_edge(e.u, e.v)) {
      throw std::invalid_argument("dropped edge " + std::to_string(e.u) + "-" +
                                  std::to_string(e.v) + " is not in the graph");
    }
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SimulationResult run_simulation_with_drop(const ModelParams& params, const Graph& g, int rounds,
                                          std::span<const Edge> drop_edges, int from_round) {
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  const auto dropped = normalized(drop_edges, g);
  auto blocked = [&](int a, int b, int round) {
    if (round < from_round) return false;
    const Edge e{std::min(a, b), std::max(a, b)};
    return std::binary_search(dropped.begin(), dropped.end(), e);
  };

  const int n = g.num_nodes();
  std::vector<Agent> agents;
  agents.reserve(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) agents.emplace_back(v, params);

  SimulationResult result;
  for (int round = 1; round <= rounds; ++round) {
    RoundRecord record;
    record.round = round;

    // Send phase: every payload is computed from pre-round states.
    for (int v = 0; v < n; ++v) {
      const Vector payload = agents[static_cast<std::size_t>(v)].outgoing();
      for (int w : g.neighbors(v)) {
        if (blocked(v, w, round)) continue;
        record.messages.push_back({v, w, payload});
      }
    }
    for (const auto& msg : record.messages) {
      agents[static_cast<std::size_t>(msg.receiver)].deliver(msg.sender, msg.payload);
    }

    // Update phase.
    record.states_after.resize(n, params.hidden_size);
    for (int v = 0; v < n; ++v) {
      auto& agent = agents[static_cast<std::size_t>(v)];
      agent.update();
      record.states_after.row(v) = agent.state().transpose();
    }
    result.trace.rounds.push_back(std::move(record));
  }

  result.estimates.reserve(static_cast<std::size_t>(n));
  for (const auto& agent : agents) result.estimates.push_back(agent.estimate());
  return result;
}

SimulationResult run_simulation(const ModelParams& params, const Graph& g, int rounds) {
  return run_simulation_with_drop(params, g, rounds, {}, rounds + 1);
}

void write_trace_csv(std::ostream& out, const RoundTrace& trace) {
  out << "round,sender,receiver";
  const Eigen::Index width = trace.rounds.empty() ? 0 : trace.rounds.front().states_after.cols();
  for (Eigen::Index k = 0; k < width; ++k) out << ",p" << k;
  out << '\n';
  for (const auto& round : trace.rounds) {
    for (const auto& msg : round.messages) {
      out << round.round << ',' << msg.sender << ',' << msg.receiver;
      for (Eigen::Index k = 0; k < msg.payload.size(); ++k) out << ',' << format_double(msg.payload(k));
      out << '\n';
    }
  }
}

double EstimateReport::abs_error(std::size_t node) const {
  return std::abs(estimates.at(node) - lambda2);
}

EstimateReport demo_figure1(const ModelParams& params, const Graph& g, int rounds) {
  EstimateReport report;
  report.lambda2 = algebraic_connectivity(g);
  report.estimates = run_simulation(params, g, rounds).estimates;
  return report;
}

void write_report_csv(std::ostream& out, const EstimateReport& report) {
  out << "node,estimate,abs_error\n";
  out << "true," << format_double(report.lambda2) << ",0\n";
  for (std::size_t v = 0; v < report.estimates.size(); ++v) {
    out << v << ',' << format_double(report.estimates[v]) << ',' << format_double(report.abs_error(v))
        << '\n';
  }
}

void render_report(std::ostream& out, const EstimateReport& report) {
  char line[96];
  std::snprintf(line, sizeof line, "true lambda2 = %.2f\n", report.lambda2);
  out << line;
  for (std::size_t v = 0; v < report.estimates.size(); ++v) {
    std::snprintf(line, sizeof line, "node %2zu  estimate %8.4f  abs_error %8.4f\n", v,
                  report.estimates[v], report.abs_error(v));
    out << line;
  }
}

}  // namespace fiedler
