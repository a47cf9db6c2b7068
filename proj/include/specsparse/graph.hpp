#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace specsparse {

using VertexId = int;
using EdgeId = int;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double w = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  VertexId vertex;
  EdgeId edge;
};

/// Signed incidence vector e_p - e_q.
struct EdgeVector {
  VertexId p;
  VertexId q;
};

/// Undirected graph with strictly positive finite weights.
///
/// Edges are stored with u < v, sorted ascending by (u, v), so edge ids and
/// iteration order are deterministic. The degree vector and a per-vertex
/// adjacency index are built once at construction; the graph is immutable.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Validates and canonicalizes `edges` (swaps to u < v, sorts). Throws
  /// ParameterError on self-loops, duplicates, out-of-range ids, or
  /// non-positive / non-finite weights.
  WeightedGraph(int num_vertices, std::vector<Edge> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }

  std::span<const Neighbor> neighbors(VertexId p) const;
  const Vector& degrees() const { return degrees_; }

  std::optional<EdgeId> find_edge(VertexId p, VertexId q) const;

  /// Same topology, new weights (indexed by edge id).
  WeightedGraph with_weights(std::span<const double> weights) const;

  /// Subgraph on the same vertex set keeping the listed edges.
  WeightedGraph subgraph(std::span<const EdgeId> keep) const;

  double total_weight() const;

  SparseMatrix laplacian() const;
  SparseMatrix adjacency() const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  void build_index();

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> offsets_;
  std::vector<Neighbor> adjacency_;
  Vector degrees_;
};

/// x^T L x.
double laplacian_quadratic(const WeightedGraph& g, const Vector& x);

/// L x.
Vector laplacian_apply(const WeightedGraph& g, const Vector& x);

/// Component id per vertex, numbered in order of lowest member vertex.
std::vector<int> connected_components(const WeightedGraph& g);

int count_components(const WeightedGraph& g);

inline bool is_connected(const WeightedGraph& g) {
  return g.num_vertices() > 0 && count_components(g) == 1;
}

/// Off-tree edge budget (|E_S| - |V| + 1) / |V|.
double off_tree_budget(const WeightedGraph& s);

}  // namespace specsparse
