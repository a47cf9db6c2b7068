#pragma once

#include "specsparse/graph.hpp"
#include "specsparse/tree.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace specsparse {

struct RecoveryOptions {
  double budget = 0.15;          // cap on (|E_S| - |V| + 1) / |V|
  double batch_fraction = 0.01;  // edges per round, as a fraction of |V|
  int k_eigs = 10;               // bottom eigenvalues tracked for stability
  double stability_tol = 0.01;   // stop once ratio_var drops below this
  int t = 2;                     // generalized power iterations per embedding
  std::uint64_t seed = 0;
  bool rank_once = false;        // embed once on the tree instead of every round
  double eig_tol = 1e-6;
  int eig_max_iter = 1000;
};

struct RecoveredEdge {
  EdgeId edge;  // id in the base graph
  double criticality;
  int round;
};

struct StabilityRound {
  int round = 0;
  double budget = 0.0;
  int edges_added = 0;
  std::vector<double> eigenvalues;  // bottom-k of the normalized subgraph Laplacian
  std::optional<double> ratio_var;  // absent for the tree round
};

/// Phase-1 result: the spanning tree plus recovered off-tree edges, all at
/// their original weights.
struct Sparsifier {
  WeightedGraph subgraph;
  std::vector<EdgeId> base_edges;  // base-graph ids of subgraph edges, ascending
  std::vector<RecoveredEdge> recovered;
  double budget = 0.0;
  std::vector<StabilityRound> history;
  bool clamped = false;  // requested budget exceeded the available off-tree edges
  bool stable = false;   // stopped on the ratio_var criterion
  std::uint64_t seed = 0;
};

/// Greedy spectral-criticality recovery. Each round re-embeds the current
/// subgraph with t generalized power iterations, scores every remaining
/// off-tree edge by w (h(p) - h(q))^2, adds the top batch (ties by ascending
/// edge id), and records the bottom-k normalized eigenvalues and their
/// variation ratio against the previous round.
Sparsifier recover_off_tree_edges(const WeightedGraph& g, const SpanningTree& tree,
                                  const RecoveryOptions& options = {});

}  // namespace specsparse
