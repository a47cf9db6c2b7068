#pragma once

#include "specsparse/dataio.hpp"
#include "specsparse/graph.hpp"

namespace specsparse {

enum class Kernel { SelfTuningGaussian, Gaussian, DistanceReciprocal };
enum class Symmetrization { Union, Mutual };

struct KnnOptions {
  int k = 10;
  Kernel kernel = Kernel::SelfTuningGaussian;
  double sigma = 1.0;        // Gaussian only
  int self_tuning_rank = 7;  // sigma_i = distance to this neighbor (clamped to n-1)
  Symmetrization symmetrization = Symmetrization::Union;
  bool repair_connectivity = true;
};

struct KnnGraph {
  WeightedGraph graph;
  int repair_edges = 0;  // edges added to join components
};

/// Exact brute-force kNN similarity graph.
///
/// Edge (i, j) exists when j is among the k nearest neighbors of i or vice
/// versa (or both, for Mutual). Self-tuning weights are
/// exp(-d_ij^2 / (sigma_i sigma_j)). A sigma_i of zero (duplicate points) is
/// replaced by the smallest positive distance from i, or by the mean of the
/// positive sigmas when i has no positive distance at all. Disconnected
/// results are joined along a minimum spanning tree over component centroids,
/// adding for each tree link the closest point pair of the two components.
KnnGraph build_knn_graph(const Dataset& data, const KnnOptions& options = {});

}  // namespace specsparse
