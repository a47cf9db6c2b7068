#include "doctest.h"

#include "fixtures.hpp"
#include "oracle.hpp"

#include "specsparse/errors.hpp"
#include "specsparse/tree.hpp"

using namespace specsparse;

namespace {

std::set<std::pair<int, int>> tree_pairs(const WeightedGraph& g, const SpanningTree& t) {
  std::set<std::pair<int, int>> out;
  for (EdgeId e : t.tree_edges()) out.insert({g.edge(e).u, g.edge(e).v});
  return out;
}

}  // namespace

TEST_SUITE("tree") {

TEST_CASE("max-weight tree on a weighted triangle") {
  const WeightedGraph g(3, {{0, 1, 3.0}, {1, 2, 2.0}, {0, 2, 1.0}});
  const auto t = build_spanning_tree(g);
  CHECK(tree_pairs(g, t) == std::set<std::pair<int, int>>{{0, 1}, {1, 2}});
}

TEST_CASE("a tree-shaped graph is its own spanning tree") {
  for (auto method : {TreeMethod::MaxWeight, TreeMethod::AkpwLsst}) {
    const WeightedGraph g(6, {{0, 1, 1.0}, {1, 2, 0.5}, {1, 3, 2.0}, {3, 4, 1.5}, {3, 5, 0.1}});
    const auto t = build_spanning_tree(g, method);
    CHECK(t.tree_edges().size() == 5);
    CHECK(t.as_graph(g) == g);
  }
}

TEST_CASE("unit C4 ties follow ascending (u, v)") {
  // Kruskal visits (0,1), (0,3), (1,2), (2,3); the first three are acyclic.
  const auto g = fixtures::cycle(4);
  const auto t = build_spanning_tree(g);
  CHECK(tree_pairs(g, t) == std::set<std::pair<int, int>>{{0, 1}, {0, 3}, {1, 2}});
  CHECK(total_stretch(g, t) == doctest::Approx(6.0));
}

TEST_CASE("spanning tree validity and determinism") {
  for (auto method : {TreeMethod::MaxWeight, TreeMethod::AkpwLsst}) {
    for (int seed = 0; seed < 10; ++seed) {
      const auto g = fixtures::random_connected(40, 120, 500 + seed);
      const auto t = build_spanning_tree(g, method);
      REQUIRE(t.tree_edges().size() == 39);
      CHECK(is_connected(t.as_graph(g)));
      for (EdgeId e : t.tree_edges()) CHECK(t.is_tree_edge(e));
      const auto again = build_spanning_tree(g, method);
      CHECK(std::vector<EdgeId>(t.tree_edges().begin(), t.tree_edges().end()) ==
            std::vector<EdgeId>(again.tree_edges().begin(), again.tree_edges().end()));
    }
  }
}

TEST_CASE("max-weight tree has the largest total weight") {
  // Brute force over all spanning trees of a small dense graph.
  const auto g = fixtures::random_connected(6, 10, 77);
  const auto t = build_spanning_tree(g);
  double best = 0.0;
  const int m = g.num_edges();
  for (int mask = 0; mask < (1 << m); ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) != 5) continue;
    std::vector<EdgeId> keep;
    for (int e = 0; e < m; ++e)
      if (mask >> e & 1) keep.push_back(e);
    const auto s = g.subgraph(keep);
    if (is_connected(s)) best = std::max(best, s.total_weight());
  }
  CHECK(t.as_graph(g).total_weight() == doctest::Approx(best));
}

TEST_CASE("disconnected graph is rejected") {
  CHECK_THROWS_AS(build_spanning_tree(WeightedGraph(4, {{0, 1, 1.0}, {2, 3, 1.0}})), ConnectivityError);
}

TEST_CASE("path resistance examples") {
  const auto p = fixtures::path(3);
  const auto t = build_spanning_tree(p);
  CHECK(tree_path_resistance(t, 0, 2) == doctest::Approx(2.0));
  CHECK(tree_path_resistance(t, 2, 0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(tree_path_resistance(t, 1, 1), ParameterError);

  const WeightedGraph single(2, {{0, 1, 4.0}});
  CHECK(tree_path_resistance(build_spanning_tree(single), 0, 1) == doctest::Approx(0.25));
}

TEST_CASE("path resistance matches the pseudoinverse and the parent walk") {
  const auto g = fixtures::random_connected(30, 0, 31);  // a random tree
  const auto t = build_spanning_tree(g);
  const Matrix pinv = oracle::pinv_sym(oracle::dense_laplacian(g));
  for (int p = 0; p < 30; ++p)
    for (int q = p + 1; q < 30; ++q) {
      const double exact = pinv(p, p) + pinv(q, q) - 2.0 * pinv(p, q);
      CHECK(std::abs(t.path_resistance(p, q) - exact) < 1e-10);
      CHECK(t.path_resistance(p, q) == doctest::Approx(t.naive_path_resistance(p, q)).epsilon(1e-13));
    }
}

TEST_CASE("total stretch equals the pencil trace") {
  const auto g = fixtures::random_connected(25, 60, 41);
  for (auto method : {TreeMethod::MaxWeight, TreeMethod::AkpwLsst}) {
    const auto t = build_spanning_tree(g, method);
    const double trace = oracle::pencil_trace(g, t.as_graph(g));
    CHECK(std::abs(total_stretch(g, t) - trace) <= 1e-8 * trace);
    CHECK(total_stretch(g, t) >= g.num_vertices() - 1 - 1e-9);
  }
  const auto tree = fixtures::random_connected(15, 0, 2);
  CHECK(total_stretch(tree, build_spanning_tree(tree)) == doctest::Approx(14.0));
}

TEST_CASE("explicit tree from edge ids") {
  const auto g = fixtures::cycle(4);
  const auto t = SpanningTree::from_edges(g, fixtures::path_edge_ids(g));
  CHECK(total_stretch(g, t) == doctest::Approx(6.0));
  CHECK(std::abs(total_stretch(g, t) - oracle::pencil_trace(g, t.as_graph(g))) < 1e-10);
  CHECK_THROWS_AS(SpanningTree::from_edges(g, {0, 1}), ConnectivityError);
}

}  // TEST_SUITE tree
