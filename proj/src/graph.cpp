#include "specsparse/graph.hpp"

#include "specsparse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace specsparse {

WeightedGraph::WeightedGraph(int num_vertices, std::vector<Edge> edges)
    : n_(num_vertices), edges_(std::move(edges)) {
  if (n_ < 0) throw ParameterError("negative vertex count");
  for (auto& e : edges_) {
    if (e.u == e.v) throw ParameterError("self-loop at vertex " + std::to_string(e.u));
    if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_)
      throw ParameterError("edge endpoint out of range");
    if (!std::isfinite(e.w) || e.w <= 0.0)
      throw ParameterError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                           ") has non-positive or non-finite weight");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
      throw ParameterError("duplicate edge (" + std::to_string(edges_[i].u) + "," +
                           std::to_string(edges_[i].v) + ")");
  }
  build_index();
}

void WeightedGraph::build_index() {
  offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  degrees_ = Vector::Zero(n_);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
    degrees_[e.u] += e.w;
    degrees_[e.v] += e.w;
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.resize(2 * edges_.size());
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId id = 0; id < num_edges(); ++id) {
    const auto& e = edges_[id];
    adjacency_[cursor[e.u]++] = {e.v, id};
    adjacency_[cursor[e.v]++] = {e.u, id};
  }
}

std::span<const Neighbor> WeightedGraph::neighbors(VertexId p) const {
  const auto begin = static_cast<std::size_t>(offsets_[p]);
  const auto end = static_cast<std::size_t>(offsets_[p + 1]);
  return std::span<const Neighbor>(adjacency_).subspan(begin, end - begin);
}

std::optional<EdgeId> WeightedGraph::find_edge(VertexId p, VertexId q) const {
  if (p > q) std::swap(p, q);
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{p, q, 0.0},
                                   [](const Edge& a, const Edge& b) {
                                     return a.u != b.u ? a.u < b.u : a.v < b.v;
                                   });
  if (it != edges_.end() && it->u == p && it->v == q)
    return static_cast<EdgeId>(it - edges_.begin());
  return std::nullopt;
}

WeightedGraph WeightedGraph::with_weights(std::span<const double> weights) const {
  if (weights.size() != edges_.size()) throw DimensionError("weight vector length mismatch");
  std::vector<Edge> out = edges_;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].w = weights[i];
  return WeightedGraph(n_, std::move(out));
}

WeightedGraph WeightedGraph::subgraph(std::span<const EdgeId> keep) const {
  std::vector<Edge> out;
  out.reserve(keep.size());
  for (EdgeId id : keep) out.push_back(edge(id));
  return WeightedGraph(n_, std::move(out));
}

double WeightedGraph::total_weight() const {
  double total = 0.0;
  for (const auto& e : edges_) total += e.w;
  return total;
}

SparseMatrix WeightedGraph::laplacian() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(4 * edges_.size() + static_cast<std::size_t>(n_));
  for (const auto& e : edges_) {
    t.emplace_back(e.u, e.v, -e.w);
    t.emplace_back(e.v, e.u, -e.w);
  }
  for (int p = 0; p < n_; ++p) t.emplace_back(p, p, degrees_[p]);
  SparseMatrix l(n_, n_);
  l.setFromTriplets(t.begin(), t.end());
  return l;
}

SparseMatrix WeightedGraph::adjacency() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * edges_.size());
  for (const auto& e : edges_) {
    t.emplace_back(e.u, e.v, e.w);
    t.emplace_back(e.v, e.u, e.w);
  }
  SparseMatrix a(n_, n_);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

double laplacian_quadratic(const WeightedGraph& g, const Vector& x) {
  if (x.size() != g.num_vertices()) throw DimensionError("vector length does not match graph");
  double sum = 0.0;
  for (const auto& e : g.edges()) {
    const double d = x[e.u] - x[e.v];
    sum += e.w * d * d;
  }
  return sum;
}

Vector laplacian_apply(const WeightedGraph& g, const Vector& x) {
  if (x.size() != g.num_vertices()) throw DimensionError("vector length does not match graph");
  Vector y = g.degrees().cwiseProduct(x);
  for (const auto& e : g.edges()) {
    y[e.u] -= e.w * x[e.v];
    y[e.v] -= e.w * x[e.u];
  }
  return y;
}

std::vector<int> connected_components(const WeightedGraph& g) {
  const int n = g.num_vertices();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<VertexId> stack;
  int next = 0;
  for (VertexId s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const VertexId p = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(p)) {
        if (comp[nb.vertex] < 0) {
          comp[nb.vertex] = next;
          stack.push_back(nb.vertex);
        }
      }
    }
    ++next;
  }
  return comp;
}

int count_components(const WeightedGraph& g) {
  const auto comp = connected_components(g);
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

double off_tree_budget(const WeightedGraph& s) {
  const double n = s.num_vertices();
  return (static_cast<double>(s.num_edges()) - n + 1.0) / n;
}

}  // namespace specsparse
