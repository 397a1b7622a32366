// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "fiedler/simulator.hpp"
#include "fiedler/spectrum.hpp"
#include "test_support.hpp"

using namespace fiedler;
using fiedler::testing::random_graph;

namespace {

// Monolithic recomputation with a per-round edge set.
std::vector<double> recompute_with_drop(const ModelParams& p, const Graph& g, int rounds,
                                        const std::vector<Edge>& dropped, int from_round) {
  std::vector<Edge> kept;
  for (const Edge& e : g.edges())
    if (std::find(dropped.begin(), dropped.end(), e) == dropped.end()) kept.push_back(e);
  const Graph reduced(g.num_nodes(), kept);
  Matrix states = initial_state(g.num_nodes(), p.hidden_size);
  for (int t = 1; t <= rounds; ++t) {
    const Graph& active = t >= from_round ? reduced : g;
    states = gru_update(p, states, message_step(p, active, states));
  }
  std::vector<double> out;
  for (int v = 0; v < g.num_nodes(); ++v) out.push_back(readout_local(p, states.row(v).transpose()));
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("simulation matches the monolithic local forward pass") {
  const int rounds_options[] = {2, 4, 8};
  for (int i = 0; i < 60; ++i) {
    const auto p = init_params(6, 100 + i);
    const Graph g = random_graph(7, 5, 12, i);
    const int rounds = rounds_options[i % 3];
    const auto sim = run_simulation(p, g, rounds);
    const auto mono = predict(p, g, rounds, ReadoutMode::local).values;
    CHECK(max_abs_diff(sim.estimates, mono) <= 1e-12);
  }
}

TEST_CASE("trace shape") {
  const auto p = init_params(4, 2);
  const Graph g = random_graph(3, 6, 9, 0);
  const auto sim = run_simulation(p, g, 5);
  REQUIRE(sim.trace.rounds.size() == 5);
  for (std::size_t t = 0; t < 5; ++t) {
    const auto& r = sim.trace.rounds[t];
    CHECK(r.round == static_cast<int>(t) + 1);
    CHECK(r.messages.size() == 2 * g.num_edges());
    CHECK(r.states_after.rows() == g.num_nodes());
    for (const auto& m : r.messages) CHECK(g.has_edge(m.sender, m.receiver));
  }

  std::ostringstream csv;
  write_trace_csv(csv, sim.trace);
  const std::string text = csv.str();
  CHECK(text.starts_with("round,sender,receiver,p0,p1,p2,p3\n"));
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) ==
        1 + 5 * 2 * g.num_edges());
}

TEST_CASE("symmetric graphs give identical estimates") {
  const auto p = init_params(5, 11);
  for (const Graph& g : {complete_graph(3), cycle_graph(7), complete_graph(6)}) {
    const auto sim = run_simulation(p, g, 3);
    for (double e : sim.estimates) CHECK(e == sim.estimates[0]);
  }
}

TEST_CASE("round synchrony: messages carry the sender's previous-round state") {
  const auto p = init_params(4, 5);
  const Graph g = random_graph(9, 7, 9, 3);
  const auto sim = run_simulation(p, g, 4);
  Matrix previous = initial_state(g.num_nodes(), 4);
  for (const auto& r : sim.trace.rounds) {
    for (const auto& m : r.messages) {
      const Vector expected = p.message * previous.row(m.sender).transpose();
      CHECK((m.payload - expected).cwiseAbs().maxCoeff() == 0.0);
    }
    previous = r.states_after;
  }
}

TEST_CASE("agents process their inbox in sender order") {
  const auto p = init_params(3, 4);
  Agent a(0, p), b(0, p);
  Vector x(3), y(3);
  x << 1e16, 1.0, -2.0;
  y << -1e16, 1.0, 3.0;
  Vector z = Vector::Constant(3, 1.0);
  a.deliver(1, x);
  a.deliver(2, y);
  a.deliver(5, z);
  b.deliver(5, z);
  b.deliver(2, y);
  b.deliver(1, x);
  CHECK(a.inbox_size() == 3);
  a.update();
  b.update();
  CHECK(a.inbox_size() == 0);
  CHECK(a.state() == b.state());
}

TEST_CASE("edge drops") {
  const auto p = init_params(5, 21);

  SUBCASE("empty drop set equals the plain run") {
    const Graph g = random_graph(1, 6, 10, 0);
    const auto plain = run_simulation(p, g, 4);
    const auto dropped = run_simulation_with_drop(p, g, 4, {}, 1);
    CHECK(plain.estimates == dropped.estimates);
  }

  SUBCASE("dropping every edge isolates identical agents") {
    const Graph g = random_graph(2, 6, 10, 1);
    const auto sim = run_simulation_with_drop(p, g, 4, g.edges(), 1);
    for (double e : sim.estimates) CHECK(e == sim.estimates[0]);
    for (const auto& r : sim.trace.rounds) CHECK(r.messages.empty());
    const Graph lone(3, {});
    CHECK(sim.estimates[0] == run_simulation(p, lone, 4).estimates[0]);
  }

  SUBCASE("matches a monolithic recomputation on the modified schedule") {
    for (int i = 0; i < 20; ++i) {
      const Graph g = random_graph(40, 6, 11, i);
      const Edge e = g.edges()[static_cast<std::size_t>(i) % g.num_edges()];
      const int from = 1 + i % 4;
      const auto sim = run_simulation_with_drop(p, g, 4, std::vector<Edge>{e}, from);
      CHECK(max_abs_diff(sim.estimates, recompute_with_drop(p, g, 4, {e}, from)) <= 1e-12);
    }
  }

  SUBCASE("a dropped edge only affects nodes within T hops of it") {
    for (int i = 0; i < 20; ++i) {
      const Graph g = i % 2 ? path_graph(12) : random_graph(41, 10, 14, i);
      const int rounds = 2;
      const Edge e = g.edges()[static_cast<std::size_t>(3 * i) % g.num_edges()];
      const auto base = run_simulation(p, g, rounds).estimates;
      const auto cut = run_simulation_with_drop(p, g, rounds, std::vector<Edge>{e}, 1).estimates;
      const auto du = hop_distances(g, e.u);
      const auto dv = hop_distances(g, e.v);
      for (int v = 0; v < g.num_nodes(); ++v) {
        const int d = std::min(du[static_cast<std::size_t>(v)], dv[static_cast<std::size_t>(v)]);
        if (d > rounds) CHECK(cut[static_cast<std::size_t>(v)] == base[static_cast<std::size_t>(v)]);
      }
    }
  }

  SUBCASE("unknown edges are rejected") {
    const Graph g = path_graph(4);
    CHECK_THROWS_AS(run_simulation_with_drop(p, g, 2, std::vector<Edge>{{0, 3}}, 1), std::invalid_argument);
  }
}

TEST_CASE("an estimate depends only on the radius-T ball") {
  const auto p = init_params(5, 8);
  const int rounds = 2;
  for (int i = 0; i < 20; ++i) {
    const Graph g = random_graph(55, 12, 16, i);
    // Sparse graphs keep far nodes; path_graph guarantees some.
    const Graph base = i % 4 == 0 ? path_graph(10) : g;
    const int v = 0;
    const auto dist = hop_distances(base, v);
    std::vector<int> far;
    for (int w = 0; w < base.num_nodes(); ++w)
      if (dist[static_cast<std::size_t>(w)] > rounds) far.push_back(w);
    if (far.size() < 2) continue;
    // Toggle one edge between two far nodes.
    std::vector<Edge> edges = base.edges();
    const Edge toggle{far[0], far[1]};
    const auto it = std::find(edges.begin(), edges.end(), toggle);
    if (it == edges.end()) edges.push_back(toggle);
    else edges.erase(it);
    const Graph modified(base.num_nodes(), edges);
    const double before = run_simulation(p, base, rounds).estimates[0];
    const double after = run_simulation(p, modified, rounds).estimates[0];
    CHECK(std::abs(before - after) <= 1e-12);
  }
}

TEST_CASE("estimate report") {
  const auto p = init_params(4, 6);
  const Graph g = random_graph(77, 8, 8, 0);
  const auto report = demo_figure1(p, g, 8);
  CHECK(report.estimates.size() == 8);
  CHECK(report.lambda2 == algebraic_connectivity(g));
  CHECK(report.estimates == run_simulation(p, g, 8).estimates);
  for (std::size_t i = 0; i < 8; ++i)
    CHECK(report.abs_error(i) == std::abs(report.estimates[i] - report.lambda2));

  std::ostringstream csv;
  write_report_csv(csv, report);
  const std::string text = csv.str();
  CHECK(text.starts_with("node,estimate,abs_error\ntrue,"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 8 + 1);

  EstimateReport fixed{0.5912, {0.5, 0.7}};
  std::ostringstream human;
  render_report(human, fixed);
  CHECK(human.str().find("true lambda2 = 0.59") != std::string::npos);
}
