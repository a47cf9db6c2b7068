#pragma once

#include "specsparse/graph.hpp"
#include "specsparse/random.hpp"

#include <random>
#include <set>
#include <utility>
#include <vector>

namespace fixtures {

using specsparse::Edge;
using specsparse::WeightedGraph;

/// Connected random graph: a random spanning tree plus `extra` random edges,
/// weights uniform in (lo, hi].
inline WeightedGraph random_connected(int n, int extra, std::uint64_t seed, double lo = 0.0, double hi = 2.0) {
  specsparse::Rng rng(seed);
  std::uniform_real_distribution<double> weight(lo, hi);
  auto w = [&] {
    double x = 0.0;
    while (!(x > lo)) x = weight(rng);
    return x;
  };
  std::set<std::pair<int, int>> seen;
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    const int u = pick(rng);
    seen.insert({u, v});
    edges.push_back({u, v, w()});
  }
  std::uniform_int_distribution<int> any(0, n - 1);
  const long max_edges = static_cast<long>(n) * (n - 1) / 2;
  while (static_cast<long>(edges.size()) < std::min<long>(max_edges, n - 1 + extra)) {
    int u = any(rng), v = any(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) continue;
    edges.push_back({u, v, w()});
  }
  return WeightedGraph(n, edges);
}

inline WeightedGraph path(int n, double w = 1.0) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, w});
  return WeightedGraph(n, edges);
}

inline WeightedGraph cycle(int n, double w = 1.0) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, w});
  edges.push_back({0, n - 1, w});
  return WeightedGraph(n, edges);
}

inline WeightedGraph grid(int rows, int cols, double w = 1.0) {
  std::vector<Edge> edges;
  auto id = [&](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), w});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), w});
    }
  return WeightedGraph(rows * cols, edges);
}

inline WeightedGraph complete(int n, double w = 1.0) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j, w});
  return WeightedGraph(n, edges);
}

/// Two unit-weight cliques of size m joined by one edge of weight `bridge`.
inline WeightedGraph two_cliques(int m, double bridge = 1e-6) {
  std::vector<Edge> edges;
  for (int base : {0, m})
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) edges.push_back({base + i, base + j, 1.0});
  edges.push_back({m - 1, m, bridge});
  return WeightedGraph(2 * m, edges);
}

inline std::vector<int> two_cliques_truth(int m) {
  std::vector<int> t(2 * m, 0);
  for (int i = m; i < 2 * m; ++i) t[i] = 1;
  return t;
}

/// Ring of `cliques` cliques of `size` vertices. Intra-clique weights are
/// uniform in [0.5, 1.5]; each adjacent pair of cliques is joined by `links`
/// random vertex pairs with weights uniform in [0.1, 0.5].
inline WeightedGraph ring_of_cliques(int cliques, int size, int links, std::uint64_t seed) {
  specsparse::Rng rng(seed);
  std::uniform_real_distribution<double> intra(0.5, 1.5), inter(0.1, 0.5);
  std::uniform_int_distribution<int> member(0, size - 1);
  std::vector<Edge> edges;
  for (int c = 0; c < cliques; ++c)
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j) edges.push_back({c * size + i, c * size + j, intra(rng)});
  for (int c = 0; c < cliques; ++c) {
    const int d = (c + 1) % cliques;
    std::set<std::pair<int, int>> used;
    while (static_cast<int>(used.size()) < links) {
      const int p = c * size + member(rng), q = d * size + member(rng);
      if (!used.insert({std::min(p, q), std::max(p, q)}).second) continue;
      edges.push_back({std::min(p, q), std::max(p, q), inter(rng)});
    }
  }
  return WeightedGraph(cliques * size, edges);
}

inline std::vector<int> ring_truth(int cliques, int size) {
  std::vector<int> t(cliques * size);
  for (int i = 0; i < cliques * size; ++i) t[i] = i / size;
  return t;
}

/// 4-cycle plus chords: a path tree 0-1-...-(n-1), the closing edge, and
/// `chords` extra random edges, so the path tree has `chords` + 1 off-tree
/// edges. Weights uniform in [0.5, 2].
inline WeightedGraph cycle_with_chords(int n, int chords, std::uint64_t seed) {
  specsparse::Rng rng(seed);
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  std::uniform_int_distribution<int> any(0, n - 1);
  std::set<std::pair<int, int>> seen;
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1, weight(rng)});
    seen.insert({i, i + 1});
  }
  edges.push_back({0, n - 1, weight(rng)});
  seen.insert({0, n - 1});
  while (static_cast<int>(edges.size()) < n + chords) {
    int u = any(rng), v = any(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) continue;
    edges.push_back({u, v, weight(rng)});
  }
  return WeightedGraph(n, edges);
}

/// Edge ids of the path 0-1-...-(n-1) in `g`.
inline std::vector<specsparse::EdgeId> path_edge_ids(const WeightedGraph& g) {
  std::vector<specsparse::EdgeId> ids;
  for (int i = 0; i + 1 < g.num_vertices(); ++i) ids.push_back(*g.find_edge(i, i + 1));
  return ids;
}

}  // namespace fixtures
