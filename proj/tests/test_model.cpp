// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "fiedler/model.hpp"
#include "test_support.hpp"

using namespace fiedler;

TEST_CASE("init_params") {
  const auto a = init_params(4, 7);
  const auto b = init_params(4, 7);
  CHECK(a == b);
  CHECK_FALSE(a == init_params(4, 8));
  CHECK(a.message.rows() == 4);
  CHECK(a.message.cols() == 4);

  const auto p = init_params(16, 1);
  const double bound = std::sqrt(6.0 / 32.0);
  CHECK(p.local_readout.hidden_weight.cwiseAbs().maxCoeff() <= bound);
  CHECK(p.gru.update_input.cwiseAbs().maxCoeff() <= bound);
  CHECK(p.local_readout.output_weight.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 17.0));
  CHECK(p.gru.update_bias.isZero(0.0));
  CHECK(p.local_readout.output_bias == 0.0);
  CHECK(p.message.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("tensor layout") {
  auto p = ModelParams::zeros(3);
  CHECK(parameter_count(p) == 7 * 9 + 3 * 3 + 2 * (9 + 3 + 3 + 1));
  const auto ts = tensors(p);
  CHECK(ts.front().name == "message");
  CHECK(ts.back().name == "global_readout.output_bias");
  CHECK(all_finite(p));
  p.gru.reset_bias(1) = std::nan("");
  CHECK_FALSE(all_finite(p));
}

TEST_CASE("initial_state") {
  const Matrix h = initial_state(2, 3);
  Matrix expected(2, 3);
  expected << 1, 0, 0, 1, 0, 0;
  CHECK(h == expected);
}

TEST_CASE("message_step") {
  auto p = ModelParams::zeros(3);
  p.message = Matrix::Identity(3, 3);
  const Graph p3 = path_graph(3);
  Matrix h(3, 3);
  h << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const Matrix m = message_step(p, p3, h);
  CHECK(m.row(1) == (h.row(0) + h.row(2)));
  CHECK(m.row(0) == h.row(1));

  const Graph g = testing::random_graph(3, 6, 10);
  Matrix same = Matrix::Zero(g.num_nodes(), 3);
  same.rowwise() += Eigen::RowVector3d(0.5, -1.0, 2.0);
  const Matrix ms = message_step(p, g, same);
  for (int v = 0; v < g.num_nodes(); ++v) CHECK(ms.row(v) == g.degree(v) * same.row(0));
}

TEST_CASE("message_step is local") {
  const auto p = init_params(6, 3);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Graph g = testing::random_graph(40 + s, 6, 12);
    Rng rng(s);
    Matrix h = Matrix::Random(g.num_nodes(), 6);
    const Matrix before = message_step(p, g, h);
    for (int v = 0; v < g.num_nodes(); ++v) {
      for (int w = 0; w < g.num_nodes(); ++w) {
        if (w == v || g.has_edge(v, w)) continue;
        Matrix perturbed = h;
        perturbed.row(w).array() += 1.0;
        const Matrix after = message_step(p, g, perturbed);
        CHECK(after.row(v) == before.row(v));  // bitwise
      }
    }
  }
}

TEST_CASE("gru_update gate limits") {
  auto p = init_params(4, 9);
  Matrix h(2, 4), m(2, 4);
  h << 0.3, -0.2, 0.1, 0.9, -0.5, 0.4, 0.0, 0.2;
  m << 1.0, 2.0, -1.0, 0.5, 0.0, -0.3, 0.7, 1.1;

  SUBCASE("closed update gate keeps the state") {
    p.gru.update_bias.setConstant(-50.0);
    CHECK((gru_update(p, h, m) - h).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("open update gate takes the candidate") {
    p.gru.update_bias.setConstant(50.0);
    const auto act = gru_forward(p.gru, h, m);
    CHECK((act.next_state - act.candidate).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("zero inputs and biases give zero") {
    const Matrix zero = Matrix::Zero(2, 4);
    CHECK(gru_update(p, zero, zero).isZero(0.0));
  }
}

TEST_CASE("readouts") {
  auto p = ModelParams::zeros(3);
  p.local_readout.output_bias = 1.25;
  p.global_readout.output_bias = -0.5;
  const Vector h = Vector::Constant(3, 2.0);
  CHECK(readout_local(p, h) == 1.25);

  p = init_params(3, 5);
  p.local_readout.output_bias = 0.75;
  CHECK(readout_local(p, Vector::Zero(3)) == 0.75);

  // Every hidden pre-activation negative: relu kills the hidden layer.
  p.local_readout.hidden_bias.setConstant(-100.0);
  CHECK(readout_local(p, Vector::Constant(3, 0.3)) == 0.75);

  p = init_params(5, 6);
  Matrix rows = Matrix::Random(4, 5);
  Matrix shuffled = rows;
  shuffled.row(0).swap(shuffled.row(3));
  CHECK(std::abs(readout_global(p, rows) - readout_global(p, shuffled)) < 1e-12);

  const Matrix one = rows.topRows(1);
  CHECK(readout_global(p, one) ==
        doctest::Approx(readout_global(p, one.replicate(3, 1))).epsilon(1e-14));

  // readout_global on a single row equals the same MLP applied to that row.
  ModelParams q = p;
  q.local_readout = q.global_readout;
  CHECK(readout_global(p, one) == readout_local(q, one.row(0).transpose()));
}

TEST_CASE("forward shapes and cache") {
  const auto p = init_params(5, 2);
  const Graph g = testing::random_graph(8, 6, 8);
  const auto local = forward(p, g, 3, ReadoutMode::local);
  CHECK(local.estimate.values.size() == static_cast<std::size_t>(g.num_nodes()));
  CHECK(local.cache.states.size() == 4);
  CHECK(local.cache.steps.size() == 3);
  CHECK(local.cache.states[0] == initial_state(g.num_nodes(), 5));
  const auto global = forward(p, g, 3, ReadoutMode::global);
  CHECK(global.estimate.values.size() == 1);
  CHECK(global.cache.states.back() == local.cache.states.back());
  CHECK_THROWS_AS(forward(p, g, 0, ReadoutMode::local), std::invalid_argument);

  const auto t1 = predict(p, g, 1, ReadoutMode::global).values[0];
  const auto t2 = predict(p, g, 2, ReadoutMode::global).values[0];
  CHECK(t1 != t2);
}

TEST_CASE("vertex-transitive graph gives equal local estimates") {
  const auto p = init_params(8, 4);
  const auto est = predict(p, cycle_graph(5), 4, ReadoutMode::local).values;
  for (double x : est) CHECK(std::abs(x - est[0]) <= 1e-9);
}

TEST_CASE("permutation equivariance and invariance") {
  Rng rng(77);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto p = init_params(6, s);
    const Graph g = testing::random_graph(300 + s, 5, 12);
    const auto perm = testing::random_permutation(g.num_nodes(), rng);
    const Graph pg = permute(g, perm);
    const int rounds = 1 + static_cast<int>(s % 4);

    const auto a = predict(p, g, rounds, ReadoutMode::local).values;
    const auto b = predict(p, pg, rounds, ReadoutMode::local).values;
    for (int v = 0; v < g.num_nodes(); ++v)
      CHECK(std::abs(b[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] -
                     a[static_cast<std::size_t>(v)]) <= 1e-9);

    const double ga = predict(p, g, rounds, ReadoutMode::global).values[0];
    const double gb = predict(p, pg, rounds, ReadoutMode::global).values[0];
    CHECK(std::abs(ga - gb) <= 1e-9);
  }
}

TEST_CASE("backward") {
  const auto p = init_params(6, 12);
  const Graph g = testing::random_graph(21, 5, 7);

  SUBCASE("output bias gradient in local mode is the mean residual") {
    const double target = 0.8;
    const auto fwd = forward(p, g, 2, ReadoutMode::local);
    const auto bwd = backward(p, g, fwd.cache, target);
    double mean_residual = 0.0;
    for (double y : fwd.estimate.values) mean_residual += y - target;
    mean_residual /= static_cast<double>(g.num_nodes());
    CHECK(std::abs(bwd.gradients.local_readout.output_bias - mean_residual) < 1e-14);
    CHECK(bwd.gradients.global_readout.output_weight.isZero(0.0));
  }
  SUBCASE("zero residual gives zero gradient") {
    const auto fwd = forward(p, g, 3, ReadoutMode::global);
    const auto bwd = backward(p, g, fwd.cache, fwd.estimate.values[0]);
    CHECK(bwd.loss == 0.0);
    for (const auto& t : tensors(bwd.gradients))
      for (double x : t.values) CHECK(x == 0.0);
  }
  SUBCASE("cache mismatch") {
    const auto fwd = forward(p, g, 2, ReadoutMode::local);
    const Graph other = complete_graph(g.num_nodes() + 1);
    CHECK_THROWS_AS(backward(p, other, fwd.cache, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(backward(init_params(4, 1), g, fwd.cache, 1.0), std::invalid_argument);
  }
  SUBCASE("bitwise deterministic") {
    const auto f1 = forward(p, g, 3, ReadoutMode::local);
    const auto f2 = forward(p, g, 3, ReadoutMode::local);
    CHECK(f1.estimate.values == f2.estimate.values);
    CHECK(backward(p, g, f1.cache, 1.0).gradients == backward(p, g, f2.cache, 1.0).gradients);
  }
}

TEST_CASE("readout mode parsing") {
  CHECK(parse_readout_mode("local") == ReadoutMode::local);
  CHECK(parse_readout_mode("global") == ReadoutMode::global);
  CHECK(to_string(ReadoutMode::global) == "global");
  CHECK_THROWS_AS(parse_readout_mode("both"), std::invalid_argument);
}
