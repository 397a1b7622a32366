// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fiedler/graph.hpp"

namespace fiedler {

struct LabeledGraph {
  Graph graph;
  double lambda2 = 0.0;
};

struct Dataset {
  std::vector<LabeledGraph> items;
  /// Set for generated datasets; files do not carry it.
  std::optional<GraphGenConfig> provenance;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  /// Smallest and largest node count present.
  std::pair<int, int> node_range() const;
};

/// `count` connected graphs, draw indices 0..count-1 of `cfg`, each labeled
/// with its algebraic connectivity.
Dataset generate_dataset(const GraphGenConfig& cfg, std::size_t count);

/// Label tolerance enforced when reading a dataset.
inline constexpr double kLabelTolerance = 1e-9;

/// Line-oriented text format:
///
///   fiedler-dataset v1 count=<k>
///   n=<n> edges=<i-j,i-j,...> lambda2=<%.12e>
///
/// Edges are written with i < j in ascending (i, j) order.
void write_dataset(std::ostream& out, const Dataset& data);

/// Parses and re-verifies every item: graphs must be connected and each
/// stored label must agree with the eigensolver within kLabelTolerance.
/// Items keep the recomputed (full-precision) label. Throws
/// std::runtime_error on any violation.
Dataset read_dataset(std::istream& in);

void save_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset load_dataset(const std::filesystem::path& path);

/// "0-1,0-2,..." in the dataset edge syntax.
std::string format_edge_list(const std::vector<Edge>& edges);
/// Inverse of format_edge_list; an empty string yields no edges.
std::vector<Edge> parse_edge_list(std::string_view text);

}  // namespace fiedler
