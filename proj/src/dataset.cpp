// SPDX-License-Identifier: Apache-2.0
#include "fiedler/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fiedler/format.hpp"
#include "fiedler/spectrum.hpp"

namespace fiedler {

namespace {

constexpr std::string_view kHeader = "fiedler-dataset v1 count=";

int parse_int(std::string_view text, const std::string& context) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::runtime_error("bad integer '" + std::string(text) + "' in " + context);
  }
  return value;
}

std::string_view field(std::string_view token, std::string_view key, const std::string& context) {
  if (!token.starts_with(key) || token.size() < key.size() + 1 || token[key.size()] != '=') {
    throw std::runtime_error("expected " + std::string(key) + "=... in " + context);
  }
  return token.substr(key.size() + 1);
}

}  // namespace

std::pair<int, int> Dataset::node_range() const {
  if (items.empty()) throw std::logic_error("node_range of an empty dataset");
  int lo = Graph::kMaxNodes, hi = 0;
  for (const auto& item : items) {
    lo = std::min(lo, item.graph.num_nodes());
    hi = std::max(hi, item.graph.num_nodes());
  }
  return {lo, hi};
}

Dataset generate_dataset(const GraphGenConfig& cfg, std::size_t count) {
  if (count < 1) throw std::invalid_argument("dataset count must be >= 1");
  Dataset data;
  data.provenance = cfg;
  data.items.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Graph g = generate_connected_graph(cfg, i);
    const double label = algebraic_connectivity(g);
    data.items.push_back({std::move(g), label});
  }
  return data;
}

std::string format_edge_list(const std::vector<Edge>& edges) {
  std::string out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(edges[i].u);
    out += '-';
    out += std::to_string(edges[i].v);
  }
  return out;
}

std::vector<Edge> parse_edge_list(std::string_view text) {
  std::vector<Edge> edges;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      throw std::runtime_error("edge '" + std::string(item) + "' is not of the form i-j");
    }
    const std::string ctx = "edge '" + std::string(item) + "'";
    edges.push_back({parse_int(item.substr(0, dash), ctx), parse_int(item.substr(dash + 1), ctx)});
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) throw std::runtime_error("trailing comma in edge list");
  }
  return edges;
}

void write_dataset(std::ostream& out, const Dataset& data) {
  out << kHeader << data.items.size() << '\n';
  char label[32];
  for (const auto& item : data.items) {
    std::snprintf(label, sizeof label, "%.12e", item.lambda2);
    out << "n=" << item.graph.num_nodes() << " edges=" << format_edge_list(item.graph.edges())
        << " lambda2=" << label << '\n';
  }
}

Dataset read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with(kHeader)) {
    throw std::runtime_error("missing 'fiedler-dataset v1' header");
  }
  const int count = parse_int(std::string_view(line).substr(kHeader.size()), "dataset header");
  if (count < 0) throw std::runtime_error("negative dataset count");

  Dataset data;
  data.items.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const std::string ctx = "dataset item " + std::to_string(i);
    if (!std::getline(in, line)) throw std::runtime_error("dataset truncated at " + ctx);
    std::istringstream tokens(line);
    std::string n_tok, edges_tok, label_tok, extra;
    tokens >> n_tok >> edges_tok >> label_tok;
    if (label_tok.empty() || (tokens >> extra)) throw std::runtime_error("malformed " + ctx);

    const int n = parse_int(field(n_tok, "n", ctx), ctx);
    std::optional<Graph> g;
    try {
      g.emplace(n, parse_edge_list(field(edges_tok, "edges", ctx)));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(ctx + ": " + e.what());
    }
    if (!is_connected(*g)) throw std::runtime_error(ctx + ": graph is disconnected");
    const double stored = parse_double(field(label_tok, "lambda2", ctx));
    const double label = algebraic_connectivity(*g);
    if (!(std::abs(stored - label) <= kLabelTolerance)) {
      throw std::runtime_error(ctx + ": stored lambda2 " + format_double(stored) +
                               " disagrees with eigensolver value " + format_double(label));
    }
    data.items.push_back({std::move(*g), label});
  }
  if (std::getline(in, line) && !line.empty()) {
    throw std::runtime_error("dataset has more lines than its header count");
  }
  return data;
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_dataset(out, data);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset " + path.string());
  return read_dataset(in);
}

}  // namespace fiedler
