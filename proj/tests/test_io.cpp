// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "fiedler/checkpoint.hpp"
#include "fiedler/dataset.hpp"
#include "fiedler/format.hpp"
#include "fiedler/spectrum.hpp"
#include "test_support.hpp"

using namespace fiedler;

namespace {

bool bitwise_equal(const ModelParams& a, const ModelParams& b) {
  const auto ta = tensors(a);
  const auto tb = tensors(b);
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i].values.size() != tb[i].values.size()) return false;
    if (std::memcmp(ta[i].values.data(), tb[i].values.data(),
                    ta[i].values.size() * sizeof(double)) != 0)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("checkpoint round trip is bit-exact") {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const int hidden = 1 + static_cast<int>(rng.below(9));
    auto params = init_params(hidden, rng.next());
    // Awkward values: tiny, huge, negative zero, subnormal.
    auto ts = tensors(params);
    for (auto& t : ts)
      for (double& x : t.values) x *= std::pow(10.0, rng.uniform(-30, 30));
    ts[0].values[0] = -0.0;
    ts[1].values[0] = std::numeric_limits<double>::denorm_min();
    params.global_readout.output_bias = 1.0 / 3.0;

    const std::optional<CheckpointMeta> meta =
        trial % 2 ? std::optional<CheckpointMeta>{{ReadoutMode::global, 8, 9, 11}} : std::nullopt;
    std::stringstream ss;
    write_checkpoint(ss, {params, meta});
    const auto back = read_checkpoint(ss);
    CHECK(bitwise_equal(back.params, params));
    CHECK(back.meta == meta);
  }
}

TEST_CASE("checkpoint header and rejection of malformed files") {
  std::stringstream ss;
  write_checkpoint(ss, {init_params(2, 0), std::nullopt});
  const std::string text = ss.str();
  CHECK(text.starts_with("fiedler-params v1 H=2\ntensor message 2 2\n"));
  CHECK(text.ends_with("end\n"));

  auto fails = [](const std::string& s) {
    std::istringstream in(s);
    CHECK_THROWS_AS(read_checkpoint(in), std::runtime_error);
  };
  fails("");
  fails("fiedler-params v2 H=2\n");
  fails("not-a-checkpoint v1 H=2\n");
  fails(text.substr(0, text.size() / 2));
  std::string renamed = text;
  renamed.replace(renamed.find("message"), 7, "massage");
  fails(renamed);
  std::string garbage = text;
  garbage.replace(garbage.find('\n', 22) + 1, 1, "x");
  fails(garbage);
}

TEST_CASE("dataset format") {
  Dataset d;
  d.items.push_back({path_graph(3), algebraic_connectivity(path_graph(3))});
  d.items.push_back({star_graph(4), algebraic_connectivity(star_graph(4))});
  std::stringstream ss;
  write_dataset(ss, d);
  CHECK(ss.str() ==
        "fiedler-dataset v1 count=2\n"
        "n=3 edges=0-1,1-2 lambda2=1.000000000000e+00\n"
        "n=5 edges=0-1,0-2,0-3,0-4 lambda2=1.000000000000e+00\n");
  const auto back = read_dataset(ss);
  REQUIRE(back.size() == 2);
  CHECK(back.items[1].graph == star_graph(4));
  CHECK(back.items[0].lambda2 == algebraic_connectivity(path_graph(3)));
}

TEST_CASE("dataset round trip keeps graphs and labels") {
  const auto d = generate_dataset({5, 12, 0.2, 0.6, 42}, 50);
  std::stringstream ss;
  write_dataset(ss, d);
  const auto back = read_dataset(ss);
  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(back.items[i].graph == d.items[i].graph);
    CHECK(back.items[i].lambda2 == d.items[i].lambda2);
  }
  std::stringstream again;
  write_dataset(again, back);
  CHECK(again.str() == ss.str());
}

TEST_CASE("dataset reader re-verifies labels and connectivity") {
  auto fails = [](const std::string& s) {
    std::istringstream in(s);
    CHECK_THROWS_AS(read_dataset(in), std::runtime_error);
  };
  fails("fiedler-dataset v1 count=1\nn=3 edges=0-1,1-2 lambda2=1.1e+00\n");
  fails("fiedler-dataset v1 count=1\nn=4 edges=0-1,2-3 lambda2=0e+00\n");
  fails("fiedler-dataset v1 count=2\nn=3 edges=0-1,1-2 lambda2=1e+00\n");
  fails("fiedler-dataset v1 count=1\nn=3 edges=0-1,1-1 lambda2=1e+00\n");
  fails("fiedler-dataset v1 count=1\nn=3 edges=0-1;1-2 lambda2=1e+00\n");
  fails("fiedler-dataset v0 count=1\n");
  fails("fiedler-dataset v1 count=0\nn=3 edges=0-1,1-2 lambda2=1e+00\n");

  std::istringstream ok("fiedler-dataset v1 count=1\nn=3 edges=0-1,1-2 lambda2=1.0000000000001e+00\n");
  CHECK(read_dataset(ok).items[0].lambda2 == doctest::Approx(1.0));
}

TEST_CASE("generate_dataset") {
  const GraphGenConfig cfg{9, 11, 0.2, 0.6, 7};
  const auto d = generate_dataset(cfg, 100);
  CHECK(d.size() == 100);
  for (const auto& item : d.items) {
    CHECK(item.graph.num_nodes() >= 9);
    CHECK(item.graph.num_nodes() <= 11);
    CHECK(item.lambda2 > 0.0);
  }
  std::stringstream a, b;
  write_dataset(a, d);
  write_dataset(b, generate_dataset(cfg, 100));
  CHECK(a.str() == b.str());
  CHECK(d.node_range() == std::pair{9, 11});
  CHECK_THROWS_AS(generate_dataset(cfg, 0), std::invalid_argument);
}

TEST_CASE("edge list syntax") {
  CHECK(parse_edge_list("").empty());
  CHECK(parse_edge_list("0-1,2-3") == std::vector<Edge>{{0, 1}, {2, 3}});
  CHECK(format_edge_list({{0, 1}, {2, 3}}) == "0-1,2-3");
  CHECK_THROWS_AS(parse_edge_list("0-1,"), std::runtime_error);
  CHECK_THROWS_AS(parse_edge_list("01"), std::runtime_error);
  CHECK_THROWS_AS(parse_edge_list("a-1"), std::runtime_error);
}

TEST_CASE("double formatting round trips") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-300, 300));
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK_THROWS_AS(parse_double("1.0x"), std::runtime_error);
  CHECK_THROWS_AS(parse_double(""), std::runtime_error);
}
