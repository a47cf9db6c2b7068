#include "doctest.h"

#include "fixtures.hpp"
#include "oracle.hpp"

#include "specsparse/errors.hpp"
#include "specsparse/pencil.hpp"
#include "specsparse/scale.hpp"
#include "specsparse/sparsify.hpp"
#include "specsparse/tree.hpp"

#include <cmath>

using namespace specsparse;

namespace {

WeightedGraph path_tree_of(const WeightedGraph& g) {
  return SpanningTree::from_edges(g, fixtures::path_edge_ids(g)).as_graph(g);
}

}  // namespace

TEST_SUITE("scale") {

TEST_CASE("initial scale factor examples") {
  CHECK(initial_scale_factor(4.0, 4.0) == doctest::Approx(0.1));
  CHECK(initial_scale_factor(100.0, 1.0) == doctest::Approx(1.0));
  const auto g = fixtures::path(4, 2.0);
  const auto s = initial_scale(g, 4.0, 4.0);
  for (const auto& e : s.edges()) CHECK(e.w == doctest::Approx(0.2));
  CHECK(initial_scale(g, 100.0, 1.0) == g);
  CHECK_THROWS_AS(initial_scale_factor(1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(initial_scale_factor(-1.0, -2.0), ParameterError);
  CHECK_THROWS_AS(initial_scale_factor(1.0, 2.0), ParameterError);
}

TEST_CASE("uniform scaling keeps kappa and shifts the pencil by the reciprocal factor") {
  const auto g = fixtures::random_connected(30, 60, 21);
  const auto s = build_spanning_tree(g).as_graph(g);
  const auto before = oracle::pencil(g, s);
  const double l1 = before.values[before.values.size() - 1], ln = before.values[0];
  const double c = initial_scale_factor(l1, ln);
  const auto after = oracle::pencil(g, initial_scale(s, l1, ln));
  const double l1s = after.values[after.values.size() - 1], lns = after.values[0];
  CHECK(l1s / lns == doctest::Approx(l1 / ln).epsilon(1e-9));
  CHECK(l1s == doctest::Approx(l1 / c).epsilon(1e-9));
  CHECK(lns == doctest::Approx(ln / c).epsilon(1e-9));
}

TEST_CASE("literal clamp evaluates the degree formula exactly") {
  // d_G = (3, 5), d_S = (2, 4): an update of 10 drives phi to 3 / 12 = 0.25,
  // below lambda_n * Delta = 1 * 0.9.
  const double delta = 0.9;
  bool fired = false;
  const double dw = clamp_update(10.0, 3.0, 5.0, 2.0, 4.0, 1.0, delta, ClampRule::Literal, &fired);
  CHECK(fired);
  CHECK(dw == std::min(3.0 / delta - 2.0, 5.0 / delta - 4.0));

  const double dl = clamp_update(10.0, 3.0, 5.0, 2.0, 4.0, 2.0, delta, ClampRule::LambdaScaled, &fired);
  CHECK(fired);
  CHECK(dl == std::min(3.0 / (2.0 * delta) - 2.0, 5.0 / (2.0 * delta) - 4.0));

  // A small update leaves phi above the floor.
  CHECK(clamp_update(0.01, 3.0, 5.0, 2.0, 4.0, 1.0, delta, ClampRule::Literal, &fired) == 0.01);
  CHECK_FALSE(fired);
}

TEST_CASE("S = G: lambda_1 starts at 1 and the loop exits quickly") {
  const auto g = fixtures::random_connected(25, 50, 4);
  const auto m = condition_metrics(g, g);
  CHECK(m.lambda_1 == doctest::Approx(1.0));
  const auto r = scale_subgraph(g, g, {.seed = 1});
  CHECK(r.initial_factor == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(r.state.k >= 1);
  CHECK(r.state.k <= 3);
  for (const auto& e : r.scaled.edges()) CHECK(e.w > 0.0);
}

TEST_CASE("C4 path tree: lambda_1 drops below its initial-scaled value") {
  const auto g = fixtures::cycle(4);
  const auto s = path_tree_of(g);
  const auto p0 = oracle::pencil(g, s);
  const double l1 = p0.values[p0.values.size() - 1], ln = p0.values[0];
  const auto s1 = initial_scale(s, l1, ln);
  const double after_initial = oracle::lambda_max(g, s1);
  const auto r = sgd_scale(g, s1, {.seed = 3}, std::make_pair(after_initial, oracle::lambda_min(g, s1)));
  CHECK(oracle::lambda_max(g, r.scaled) < after_initial);
}

TEST_CASE("scaling respects lambda_1 decrease, the lambda_n floor and positivity") {
  for (int seed = 0; seed < 6; ++seed) {
    const auto g = fixtures::random_connected(40, 100, 200 + seed);
    const auto t = build_spanning_tree(g);
    const auto sp = recover_off_tree_edges(g, t, {.budget = 0.15, .batch_fraction = 0.05, .k_eigs = 3,
                                                   .stability_tol = 0.0, .seed = 1});
    const ScaleParams params{.seed = static_cast<std::uint64_t>(seed)};
    const auto r = scale_subgraph(g, sp.subgraph, params);
    // Pencil right after the uniform initial step.
    const auto pre = oracle::pencil(g, sp.subgraph);
    const double l1_pre = pre.values[pre.values.size() - 1] / r.initial_factor;
    const double ln_pre = pre.values[0] / r.initial_factor;
    const auto post = oracle::pencil(g, r.scaled);
    CHECK(post.values[post.values.size() - 1] <= l1_pre * (1 + 1e-12));
    CHECK(post.values[0] >= 0.95 * params.delta_bar_lambda_n * ln_pre);
    for (double w : r.state.w) CHECK(w > 0.0);
    CHECK(r.state.k <= params.n_max);
    CHECK((r.state.d_S - r.scaled.degrees()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("a sweep that cannot meet the lambda_n floor is undone") {
  // Reference far above the entry lambda_n: no step size can satisfy it.
  const auto g = fixtures::grid(6, 8);
  const auto s = build_spanning_tree(g).as_graph(g);
  const double ln = oracle::lambda_min(g, s);
  const ScaleParams params{.seed = 1, .max_halvings = 3};
  const auto r = sgd_scale(g, s, params, std::make_pair(oracle::lambda_max(g, s), ln), 10.0 * ln);
  REQUIRE(r.state.floor_hit);
  REQUIRE(r.state.history.size() == 1);
  CHECK(r.state.history[0].reverted);
  CHECK(r.state.history[0].halvings == 3);
  CHECK(r.state.history[0].step == doctest::Approx(0.125));
  CHECK_FALSE(r.state.converged);
  CHECK(r.scaled == s);
  CHECK((r.state.d_S - s.degrees()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("backtracking keeps every accepted sweep above the floor") {
  for (int seed = 0; seed < 4; ++seed) {
    const auto g = fixtures::ring_of_cliques(4, 12, 4, 4100 + seed);
    const auto t = build_spanning_tree(g);
    const auto sp = recover_off_tree_edges(g, t, {.budget = 0.15, .batch_fraction = 0.05, .k_eigs = 3,
                                                   .stability_tol = 0.0, .seed = 1});
    const auto r = scale_subgraph(g, sp.subgraph, {.seed = static_cast<std::uint64_t>(seed)});
    for (const auto& it : r.state.history) {
      if (!it.reverted) CHECK(it.lambda_n >= r.state.lambda_n_floor);
      CHECK(it.step == std::ldexp(1.0, -it.halvings));
    }
  }
}

TEST_CASE("scaling is deterministic") {
  const auto g = fixtures::random_connected(40, 100, 7);
  const auto s = build_spanning_tree(g).as_graph(g);
  const auto a = scale_subgraph(g, s, {.seed = 11});
  const auto b = scale_subgraph(g, s, {.seed = 11});
  CHECK(a.state.w == b.state.w);
  CHECK(a.scaled == b.scaled);
}

TEST_CASE("first-order sensitivity matches a finite difference") {
  int checked = 0;
  for (int seed = 0; checked < 5 && seed < 20; ++seed) {
    const auto g = fixtures::random_connected(20, 40, 300 + seed, 0.5, 2.0);
    const auto s = build_spanning_tree(g).as_graph(g);
    const auto p = oracle::pencil(g, s);
    const int top = static_cast<int>(p.values.size()) - 1;
    if (p.values[top] - p.values[top - 1] < 1e-3 * p.values[top]) continue;
    const Vector u = p.vectors.col(top);
    ++checked;
    for (int e = 0; e < s.num_edges(); e += 3) {
      const auto& edge = s.edge(e);
      const double analytic = edge_sensitivity(p.values[top], u, {edge.u, edge.v});
      const double step = 1e-6 * edge.w;
      std::vector<double> wp, wm;
      for (const auto& x : s.edges()) {
        wp.push_back(x.w);
        wm.push_back(x.w);
      }
      wp[e] += step;
      wm[e] -= step;
      const double fd = (oracle::lambda_max(g, s.with_weights(wp)) - oracle::lambda_max(g, s.with_weights(wm))) / (2 * step);
      CHECK(fd == doctest::Approx(analytic).epsilon(0.05));
    }
  }
  CHECK(checked == 5);
}

TEST_CASE("parameter checks") {
  const auto g = fixtures::cycle(6);
  const auto s = path_tree_of(g);
  CHECK_THROWS_AS(sgd_scale(g, s, {.delta_bar_lambda_n = 0.0}), ParameterError);
  CHECK_THROWS_AS(sgd_scale(g, s, {.beta = 1.0}), ParameterError);
  CHECK_THROWS_AS(sgd_scale(g, s, {.n_max = 0}), ParameterError);
  const WeightedGraph foreign(6, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {0, 5, 1.0}, {1, 4, 1.0}});
  CHECK_THROWS_AS(sgd_scale(g, foreign, {}), ParameterError);
}

}  // TEST_SUITE scale
