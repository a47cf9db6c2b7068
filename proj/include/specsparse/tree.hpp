#pragma once

#include "specsparse/graph.hpp"

#include <span>
#include <vector>

namespace specsparse {

enum class TreeMethod { MaxWeight, AkpwLsst };

/// Rooted spanning tree of a connected graph.
///
/// Holds binary-lifting ancestor tables and root-to-vertex sums of reciprocal
/// weights, so a tree path resistance costs one LCA query.
class SpanningTree {
 public:
  /// Builds from graph edge ids; throws ConnectivityError unless the edges
  /// form a spanning tree of `graph`.
  static SpanningTree from_edges(const WeightedGraph& graph, std::vector<EdgeId> tree_edges,
                                 VertexId root = 0);

  int num_vertices() const { return static_cast<int>(parent_.size()); }
  VertexId root() const { return root_; }
  VertexId parent(VertexId v) const { return parent_[v]; }
  double parent_weight(VertexId v) const { return parent_weight_[v]; }
  int depth(VertexId v) const { return depth_[v]; }

  /// Graph edge ids of the tree, ascending.
  std::span<const EdgeId> tree_edges() const { return tree_edges_; }
  bool is_tree_edge(EdgeId e) const { return in_tree_[static_cast<std::size_t>(e)]; }

  VertexId lca(VertexId p, VertexId q) const;

  /// Sum of 1/w along the tree path; 0 when p == q.
  double path_resistance(VertexId p, VertexId q) const;

  /// Same quantity by walking parent pointers; O(depth). Used for checks.
  double naive_path_resistance(VertexId p, VertexId q) const;

  WeightedGraph as_graph(const WeightedGraph& graph) const;

 private:
  VertexId root_ = 0;
  std::vector<VertexId> parent_;
  std::vector<double> parent_weight_;
  std::vector<int> depth_;
  std::vector<double> root_resistance_;
  std::vector<std::vector<VertexId>> up_;  // up_[j][v] = 2^j-th ancestor
  std::vector<EdgeId> tree_edges_;
  std::vector<bool> in_tree_;
};

/// Deterministic spanning tree. MaxWeight: Kruskal on descending weight,
/// ties by ascending (u, v). AkpwLsst: ball-growing low-stretch tree over
/// geometric length classes (length = 1/w).
SpanningTree build_spanning_tree(const WeightedGraph& graph, TreeMethod method = TreeMethod::MaxWeight);

/// Throws ParameterError when p == q.
double tree_path_resistance(const SpanningTree& tree, VertexId p, VertexId q);

/// sum over graph edges of w_pq * tree_path_resistance(p, q) = tr(L_S^+ L_G).
double total_stretch(const WeightedGraph& graph, const SpanningTree& tree);

}  // namespace specsparse
