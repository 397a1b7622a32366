// SPDX-License-Identifier: Apache-2.0
#include "fiedler/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "fiedler/rng.hpp"

namespace fiedler {

Graph::Graph(int num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  if (num_nodes_ < kMinNodes || num_nodes_ > kMaxNodes) {
    throw std::invalid_argument("graph node count " + std::to_string(num_nodes_) +
                                " outside [" + std::to_string(kMinNodes) + ", " +
                                std::to_string(kMaxNodes) + "]");
  }
  for (auto& e : edges_) {
    if (e.u == e.v) throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
    if (e.u < 0 || e.v < 0 || e.u >= num_nodes_ || e.v >= num_nodes_) {
      throw std::invalid_argument("edge endpoint out of range: " + std::to_string(e.u) + "-" +
                                  std::to_string(e.v));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw std::invalid_argument("duplicate edge " + std::to_string(dup->u) + "-" +
                                std::to_string(dup->v));
  }
  adjacency_.resize(static_cast<std::size_t>(num_nodes_));
  for (const auto& e : edges_) {
    adjacency_[static_cast<std::size_t>(e.u)].push_back(e.v);
    adjacency_[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (auto& row : adjacency_) std::sort(row.begin(), row.end());
}

bool Graph::has_edge(int a, int b) const {
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

void GraphGenConfig::validate() const {
  if (n_min < Graph::kMinNodes || n_max > Graph::kMaxNodes || n_min > n_max) {
    throw std::invalid_argument("node range [" + std::to_string(n_min) + ", " +
                                std::to_string(n_max) + "] invalid");
  }
  if (!(p_min > 0.0) || !(p_max <= 1.0) || p_min > p_max) {
    throw std::invalid_argument("edge probability range must satisfy 0 < p_min <= p_max <= 1");
  }
}

Graph generate_connected_graph(const GraphGenConfig& cfg, std::uint64_t draw_index) {
  cfg.validate();
  Rng rng(cfg.seed, draw_index);
  for (int attempt = 0; attempt < kMaxConsecutiveRejections; ++attempt) {
    const int n = rng.between(cfg.n_min, cfg.n_max);
    const double p = rng.uniform(cfg.p_min, cfg.p_max);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.uniform() < p) edges.push_back({i, j});
      }
    }
    Graph g(n, std::move(edges));
    if (is_connected(g)) return g;
  }
  throw GenerationError("no connected graph after " + std::to_string(kMaxConsecutiveRejections) +
                        " draws; edge probability range is degenerate");
}

std::vector<int> hop_distances(const Graph& g, int source) {
  std::vector<int> dist(static_cast<std::size_t>(g.num_nodes()), -1);
  std::deque<int> queue{source};
  dist[static_cast<std::size_t>(source)] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : g.neighbors(v)) {
      auto& d = dist[static_cast<std::size_t>(w)];
      if (d < 0) {
        d = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

bool is_connected(const Graph& g) {
  const auto dist = hop_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

Eigen::MatrixXd laplacian(const Graph& g) {
  const int n = g.num_nodes();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    lap(e.u, e.v) -= 1.0;
    lap(e.v, e.u) -= 1.0;
    lap(e.u, e.u) += 1.0;
    lap(e.v, e.v) += 1.0;
  }
  return lap;
}

Graph permute(const Graph& g, std::span<const int> perm) {
  const int n = g.num_nodes();
  if (static_cast<int>(perm.size()) != n) {
    throw std::invalid_argument("permutation length does not match node count");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int target : perm) {
    if (target < 0 || target >= n || seen[static_cast<std::size_t>(target)]) {
      throw std::invalid_argument("not a permutation of 0..n-1");
    }
    seen[static_cast<std::size_t>(target)] = true;
  }
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    edges.push_back({perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)]});
  }
  return Graph(n, std::move(edges));
}

Graph complete_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  return Graph(n, std::move(edges));
}

Graph path_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph(n, std::move(edges));
}

Graph cycle_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return Graph(n, std::move(edges));
}

Graph star_graph(int leaves) {
  std::vector<Edge> edges;
  for (int i = 1; i <= leaves; ++i) edges.push_back({0, i});
  return Graph(leaves + 1, std::move(edges));
}

}  // namespace fiedler
