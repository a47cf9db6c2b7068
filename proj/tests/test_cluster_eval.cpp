#include "doctest.h"

#include "fixtures.hpp"
#include "oracle.hpp"

#include "specsparse/cluster.hpp"
#include "specsparse/errors.hpp"
#include "specsparse/eval.hpp"
#include "specsparse/random.hpp"
#include "specsparse/scale.hpp"
#include "specsparse/sparsify.hpp"
#include "specsparse/tree.hpp"

#include <numeric>
#include <random>

using namespace specsparse;

namespace {

double acc(const std::vector<int>& a, const std::vector<int>& b) { return clustering_accuracy(a, b).acc; }

}  // namespace

TEST_SUITE("cluster") {

TEST_CASE("two separated pairs") {
  const Matrix x{{0.0}, {0.1}, {10.0}, {10.1}};
  const auto r = kmeans(x, 2, {.seed = 1});
  CHECK(r.assignments[0] == r.assignments[1]);
  CHECK(r.assignments[2] == r.assignments[3]);
  CHECK(r.assignments[0] != r.assignments[2]);
  CHECK(r.inertia == doctest::Approx(0.01));
}

TEST_CASE("identical points trigger the empty-cluster repair") {
  const Matrix x = Matrix::Constant(6, 2, 3.0);
  const auto r = kmeans(x, 2, {.restarts = 1, .seed = 1});
  CHECK(r.inertia == 0.0);
  CHECK(r.repairs >= 1);
  for (int a : r.assignments) CHECK((a == 0 || a == 1));
}

TEST_CASE("gaussian blobs are recovered") {
  const int per = 100;
  Matrix x(3 * per, 2);
  std::vector<int> truth(3 * per);
  Rng rng(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double centers[3][2] = {{0.0, 0.0}, {10.0, 0.0}, {5.0, 10.0}};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < per; ++i) {
      x(c * per + i, 0) = centers[c][0] + noise(rng);
      x(c * per + i, 1) = centers[c][1] + noise(rng);
      truth[c * per + i] = c;
    }
  const auto r = kmeans(x, 3, {.seed = 2});
  CHECK(acc(r.assignments, truth) >= 0.99);
  for (std::size_t i = 1; i < r.inertia_history.size(); ++i)
    CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] * (1 + 1e-12));
  CHECK(r.centroids.allFinite());
  const auto again = kmeans(x, 3, {.seed = 2});
  CHECK(again.assignments == r.assignments);
  CHECK_THROWS_AS(kmeans(x.topRows(2), 3), ParameterError);
}

TEST_CASE("two cliques with a weak bridge") {
  const auto g = fixtures::two_cliques(8);
  const auto r = spectral_cluster(g, 2, {.seed = 1});
  CHECK(acc(r.labels, fixtures::two_cliques_truth(8)) == 1.0);
}

TEST_CASE("ring of cliques: sparsified pipeline reproduces the original partition") {
  const auto g = fixtures::ring_of_cliques(4, 20, 5, 1);
  const auto t = build_spanning_tree(g);
  const auto sp = recover_off_tree_edges(g, t, {.budget = 0.15, .batch_fraction = 0.01, .k_eigs = 4, .seed = 2});
  const auto s = scale_subgraph(g, sp.subgraph, {.seed = 3}).scaled;
  const auto direct = spectral_cluster(g, 4, {.kmeans = {.seed = 4}, .seed = 4});
  const auto sparse = spectral_cluster(s, 4, {.filter_graph = &g, .kmeans = {.seed = 4}, .seed = 4});
  CHECK(acc(sparse.labels, direct.labels) == 1.0);
  CHECK(acc(direct.labels, fixtures::ring_truth(4, 20)) == 1.0);
}

TEST_CASE("vertex permutation does not change the partition") {
  const auto g = fixtures::ring_of_cliques(3, 12, 4, 9);
  const int n = g.num_vertices();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), Rng(3));
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) edges.push_back({perm[e.u], perm[e.v], e.w});
  const WeightedGraph pg(n, edges);
  const auto a = spectral_cluster(g, 3, {.seed = 1}).labels;
  const auto b = spectral_cluster(pg, 3, {.seed = 1}).labels;
  std::vector<int> back(n);
  for (int v = 0; v < n; ++v) back[v] = b[perm[v]];
  CHECK(acc(a, back) == 1.0);
}

TEST_CASE("row normalization keeps identical rows together") {
  Matrix m{{1.0, 2.0}, {2.0, 4.0}, {-1.0, 0.5}, {0.0, 0.0}};
  const Matrix r = row_normalized(m);
  CHECK((r.row(0) - r.row(1)).norm() < 1e-15);
  CHECK(r.row(0).norm() == doctest::Approx(1.0));
  CHECK(r.row(3).norm() == 0.0);
  const auto k = kmeans(r, 2, {.seed = 1});
  CHECK(k.assignments[0] == k.assignments[1]);
}

}  // TEST_SUITE cluster

TEST_SUITE("eval") {

TEST_CASE("accuracy examples") {
  const std::vector<int> truth{0, 0, 1, 1, 2, 2};
  CHECK(acc(truth, truth) == 1.0);
  CHECK(acc({1, 1, 2, 2, 0, 0}, truth) == 1.0);
  CHECK(acc({0, 1, 0, 1}, {0, 0, 1, 1}) == 0.5);
  const auto r = clustering_accuracy(std::vector<int>{0, 1, 0, 1}, std::vector<int>{0, 0, 1, 1});
  CHECK(r.matched == 2);
  CHECK(r.n == 4);
  CHECK_THROWS_AS(clustering_accuracy(std::vector<int>{0, 1}, std::vector<int>{0}), DimensionError);
}

TEST_CASE("hungarian matches brute force") {
  Rng rng(11);
  std::uniform_int_distribution<int> label(0, 5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 30 + trial;
    std::uniform_int_distribution<int> c(0, 2 + trial % 4), k(0, 2 + (trial / 4) % 4);
    std::vector<int> pred(n), truth(n);
    for (int i = 0; i < n; ++i) {
      truth[i] = c(rng);
      pred[i] = k(rng);
    }
    const auto r = clustering_accuracy(pred, truth);
    CHECK(r.matched == oracle::brute_force_matched(r.confusion));
    CHECK(r.acc == static_cast<double>(r.matched) / n);
    std::vector<bool> used(r.truth_ids.size(), false);
    for (int m : r.mapping)
      if (m >= 0) {
        CHECK_FALSE(used[m]);
        used[m] = true;
      }
  }
}

TEST_CASE("accuracy bounds and relabeling invariance") {
  const std::vector<int> truth{0, 0, 0, 1, 1, 2, 2, 2, 2};
  CHECK(acc(std::vector<int>(9, 7), truth) == doctest::Approx(4.0 / 9.0));
  const std::vector<int> pred{3, 3, 1, 1, 1, 2, 2, 3, 2};
  std::vector<int> relabeled, retruth;
  for (int p : pred) relabeled.push_back(10 - p);
  for (int t : truth) retruth.push_back((t + 1) % 3);
  CHECK(acc(pred, truth) == acc(relabeled, retruth));
  CHECK(acc(pred, truth) >= 0.0);
  CHECK(acc(pred, truth) <= 1.0);
}

TEST_CASE("averaged run") {
  const auto one = averaged_run([](std::uint64_t s) { return RunOutcome{0.25 + 0.01 * s, {{"kmeans", 1.0}}}; }, 1, 7);
  CHECK(one.runs == 1);
  CHECK(one.acc_mean == doctest::Approx(0.32));
  CHECK(one.acc_std == 0.0);
  CHECK(one.timings_mean.at("kmeans") == 1.0);

  const auto g = fixtures::two_cliques(6);
  const auto truth = fixtures::two_cliques_truth(6);
  const auto agg = averaged_run(
      [&](std::uint64_t s) {
        return RunOutcome{clustering_accuracy(spectral_cluster(g, 2, {.kmeans = {.seed = s}, .seed = s}).labels, truth).acc,
                          {}};
      },
      5, 1);
  CHECK(agg.acc_mean == 1.0);
  CHECK(agg.acc_std == 0.0);

  try {
    averaged_run([](std::uint64_t s) -> RunOutcome {
      if (s == 12) throw std::runtime_error("boom");
      return {};
    }, 5, 10);
    FAIL("expected the aggregate to abort");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("seed 12") != std::string::npos);
  }
}

}  // TEST_SUITE eval
