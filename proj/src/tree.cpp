#include "specsparse/tree.hpp"

#include "specsparse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace specsparse {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

std::vector<EdgeId> max_weight_tree(const WeightedGraph& g) {
  std::vector<EdgeId> order(static_cast<std::size_t>(g.num_edges()));
  std::iota(order.begin(), order.end(), 0);
  // Edge ids are already in ascending (u, v) order, so a stable sort on weight
  // alone gives the tie-break.
  std::stable_sort(order.begin(), order.end(),
                   [&](EdgeId a, EdgeId b) { return g.edge(a).w > g.edge(b).w; });
  DisjointSets sets(g.num_vertices());
  std::vector<EdgeId> tree;
  tree.reserve(static_cast<std::size_t>(std::max(0, g.num_vertices() - 1)));
  for (EdgeId e : order)
    if (sets.unite(g.edge(e).u, g.edge(e).v)) tree.push_back(e);
  return tree;
}

// Alon-Karp-Peleg-West style construction. Edges are bucketed into length
// classes of ratio 2. At level i the current clusters are partitioned into
// BFS balls over edges of class <= i; a ball stops growing once the class-i
// edges leaving it number at most half of those inside. Each ball contributes
// its BFS tree (heaviest connecting edge per newly reached cluster) and is
// contracted.
std::vector<EdgeId> akpw_tree(const WeightedGraph& g) {
  const int n = g.num_vertices();
  const int m = g.num_edges();
  if (m == 0) return {};
  double min_len = std::numeric_limits<double>::infinity();
  for (const auto& e : g.edges()) min_len = std::min(min_len, 1.0 / e.w);
  std::vector<int> cls(static_cast<std::size_t>(m));
  int max_class = 0;
  for (EdgeId e = 0; e < m; ++e) {
    const double ratio = (1.0 / g.edge(e).w) / min_len;
    cls[e] = std::max(0, static_cast<int>(std::floor(std::log2(ratio) + 1e-12)));
    max_class = std::max(max_class, cls[e]);
  }

  DisjointSets clusters(n);
  std::vector<EdgeId> tree;
  constexpr double kStopRatio = 0.5;

  // The pass after the last class grows balls over whole components so the
  // result always spans.
  for (int level = 0; level <= max_class + 1; ++level) {
    const bool final_pass = level > max_class;
    // Cluster graph over active edges (class <= level, endpoints in distinct clusters).
    std::vector<std::vector<EdgeId>> incident(static_cast<std::size_t>(n));
    for (EdgeId e = 0; e < m; ++e) {
      if (cls[e] > level) continue;
      const int a = clusters.find(g.edge(e).u);
      const int b = clusters.find(g.edge(e).v);
      if (a == b) continue;
      incident[a].push_back(e);
      incident[b].push_back(e);
    }
    auto other = [&](EdgeId e, int c) {
      const int a = clusters.find(g.edge(e).u);
      return a == c ? clusters.find(g.edge(e).v) : a;
    };

    std::vector<int> ball_of(static_cast<std::size_t>(n), -1);
    std::vector<std::pair<int, int>> merges;
    std::vector<EdgeId> level_edges;
    for (int seed = 0; seed < n; ++seed) {
      if (clusters.find(seed) != seed || ball_of[seed] >= 0 || incident[seed].empty()) continue;
      ball_of[seed] = seed;
      std::vector<int> layer{seed};
      std::vector<int> members{seed};
      while (!layer.empty()) {
        // Count class-`level` edges inside and on the boundary of the ball.
        long internal = 0, boundary = 0;
        for (int c : members)
          for (EdgeId e : incident[c]) {
            if (cls[e] != level) continue;
            const int o = other(e, c);
            if (ball_of[o] == seed)
              ++internal;
            else
              ++boundary;
          }
        internal /= 2;
        if (!final_pass && boundary <= kStopRatio * static_cast<double>(internal)) break;

        // Grow one BFS layer; each new cluster joins via its heaviest edge.
        std::vector<int> next;
        std::vector<std::pair<int, EdgeId>> reach;
        for (int c : layer)
          for (EdgeId e : incident[c]) {
            const int o = other(e, c);
            if (ball_of[o] >= 0) continue;
            reach.emplace_back(o, e);
          }
        std::sort(reach.begin(), reach.end(), [&](const auto& a, const auto& b) {
          if (a.first != b.first) return a.first < b.first;
          const double wa = g.edge(a.second).w, wb = g.edge(b.second).w;
          return wa != wb ? wa > wb : a.second < b.second;
        });
        for (std::size_t i = 0; i < reach.size(); ++i) {
          if (i > 0 && reach[i].first == reach[i - 1].first) continue;
          ball_of[reach[i].first] = seed;
          next.push_back(reach[i].first);
          members.push_back(reach[i].first);
          level_edges.push_back(reach[i].second);
          merges.emplace_back(seed, reach[i].first);
        }
        layer = std::move(next);
      }
    }
    for (const auto& [a, b] : merges) clusters.unite(a, b);
    tree.insert(tree.end(), level_edges.begin(), level_edges.end());
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

}  // namespace

SpanningTree SpanningTree::from_edges(const WeightedGraph& graph, std::vector<EdgeId> tree_edges,
                                      VertexId root) {
  const int n = graph.num_vertices();
  if (n == 0) throw ParameterError("empty graph");
  if (static_cast<int>(tree_edges.size()) != n - 1)
    throw ConnectivityError("a spanning tree needs exactly n-1 edges");
  std::sort(tree_edges.begin(), tree_edges.end());

  SpanningTree t;
  t.root_ = root;
  t.in_tree_.assign(static_cast<std::size_t>(graph.num_edges()), false);
  std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(static_cast<std::size_t>(n));
  for (EdgeId e : tree_edges) {
    if (e < 0 || e >= graph.num_edges()) throw ParameterError("tree edge id out of range");
    if (t.in_tree_[e]) throw ParameterError("repeated tree edge");
    t.in_tree_[e] = true;
    adj[graph.edge(e).u].emplace_back(graph.edge(e).v, e);
    adj[graph.edge(e).v].emplace_back(graph.edge(e).u, e);
  }
  t.tree_edges_ = std::move(tree_edges);

  t.parent_.assign(static_cast<std::size_t>(n), -1);
  t.parent_weight_.assign(static_cast<std::size_t>(n), 0.0);
  t.depth_.assign(static_cast<std::size_t>(n), 0);
  t.root_resistance_.assign(static_cast<std::size_t>(n), 0.0);
  t.parent_[root] = root;
  std::queue<VertexId> bfs;
  bfs.push(root);
  int reached = 1;
  while (!bfs.empty()) {
    const VertexId p = bfs.front();
    bfs.pop();
    for (const auto& [q, e] : adj[p]) {
      if (t.parent_[q] >= 0) continue;
      t.parent_[q] = p;
      t.parent_weight_[q] = graph.edge(e).w;
      t.depth_[q] = t.depth_[p] + 1;
      t.root_resistance_[q] = t.root_resistance_[p] + 1.0 / graph.edge(e).w;
      ++reached;
      bfs.push(q);
    }
  }
  if (reached != n) throw ConnectivityError("tree edges do not span the graph");

  int levels = 1;
  while ((1 << levels) < n) ++levels;
  t.up_.assign(static_cast<std::size_t>(levels), t.parent_);
  for (int j = 1; j < levels; ++j)
    for (int v = 0; v < n; ++v) t.up_[j][v] = t.up_[j - 1][t.up_[j - 1][v]];
  return t;
}

VertexId SpanningTree::lca(VertexId p, VertexId q) const {
  if (depth_[p] < depth_[q]) std::swap(p, q);
  int diff = depth_[p] - depth_[q];
  for (int j = 0; diff; ++j, diff >>= 1)
    if (diff & 1) p = up_[j][p];
  if (p == q) return p;
  for (int j = static_cast<int>(up_.size()) - 1; j >= 0; --j) {
    if (up_[j][p] != up_[j][q]) {
      p = up_[j][p];
      q = up_[j][q];
    }
  }
  return parent_[p];
}

double SpanningTree::path_resistance(VertexId p, VertexId q) const {
  if (p == q) return 0.0;
  const VertexId a = lca(p, q);
  return root_resistance_[p] + root_resistance_[q] - 2.0 * root_resistance_[a];
}

double SpanningTree::naive_path_resistance(VertexId p, VertexId q) const {
  double r = 0.0;
  while (p != q) {
    if (depth_[p] >= depth_[q]) {
      r += 1.0 / parent_weight_[p];
      p = parent_[p];
    } else {
      r += 1.0 / parent_weight_[q];
      q = parent_[q];
    }
  }
  return r;
}

WeightedGraph SpanningTree::as_graph(const WeightedGraph& graph) const {
  return graph.subgraph(tree_edges_);
}

SpanningTree build_spanning_tree(const WeightedGraph& graph, TreeMethod method) {
  if (!is_connected(graph)) throw ConnectivityError("spanning tree requires a connected graph");
  auto edges = method == TreeMethod::MaxWeight ? max_weight_tree(graph) : akpw_tree(graph);
  return SpanningTree::from_edges(graph, std::move(edges));
}

double tree_path_resistance(const SpanningTree& tree, VertexId p, VertexId q) {
  if (p == q) throw ParameterError("path resistance needs distinct endpoints");
  return tree.path_resistance(p, q);
}

double total_stretch(const WeightedGraph& graph, const SpanningTree& tree) {
  double total = 0.0;
  for (EdgeId e = 0; e < graph.num_edges(); ++e) {
    const auto& edge = graph.edge(e);
    total += tree.is_tree_edge(e) ? 1.0 : edge.w * tree.path_resistance(edge.u, edge.v);
  }
  return total;
}

}  // namespace specsparse
