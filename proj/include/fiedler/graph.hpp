// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace fiedler {

/// Undirected edge, stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Undirected, unweighted communication topology on nodes 0..n-1.
///
/// Construction normalizes every edge to (min, max), sorts the edge list and
/// builds ascending neighbor lists. Self-loops, duplicates, out-of-range
/// endpoints and node counts outside [kMinNodes, kMaxNodes] throw
/// std::invalid_argument. Connectivity is not enforced here; see
/// is_connected().
class Graph {
 public:
  static constexpr int kMinNodes = 3;
  static constexpr int kMaxNodes = 64;

  Graph(int num_nodes, std::vector<Edge> edges);

  int num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Neighbors of `v` in ascending order.
  std::span<const int> neighbors(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
  bool has_edge(int a, int b) const;

  bool operator==(const Graph& other) const {
    return num_nodes_ == other.num_nodes_ && edges_ == other.edges_;
  }

 private:
  int num_nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

/// Random-graph law for dataset generation: n ~ U{n_min..n_max},
/// p ~ U[p_min, p_max], then G(n, p).
struct GraphGenConfig {
  int n_min = 9;
  int n_max = 11;
  double p_min = 0.2;
  double p_max = 0.6;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when the ranges are unusable.
  void validate() const;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxConsecutiveRejections = 10000;

/// Draws a connected graph, rejecting and redrawing (n, p and edges)
/// whenever the sample is disconnected. Deterministic in (cfg.seed,
/// draw_index). Throws GenerationError after kMaxConsecutiveRejections.
Graph generate_connected_graph(const GraphGenConfig& cfg, std::uint64_t draw_index);

/// True iff a breadth-first search from node 0 reaches every node.
bool is_connected(const Graph& g);

/// L = D - A as a dense n x n matrix.
Eigen::MatrixXd laplacian(const Graph& g);

/// Relabels node i as perm[i]. Throws std::invalid_argument unless `perm`
/// is a bijection on 0..n-1.
Graph permute(const Graph& g, std::span<const int> perm);

/// Breadth-first hop distances from `source`; unreachable nodes get -1.
std::vector<int> hop_distances(const Graph& g, int source);

Graph complete_graph(int n);
Graph path_graph(int n);
Graph cycle_graph(int n);
/// Star with one hub (node 0) and `leaves` leaves.
Graph star_graph(int leaves);

}  // namespace fiedler
