#pragma once

#include "specsparse/eig.hpp"
#include "specsparse/graph.hpp"

#include <cstdint>
#include <vector>

namespace specsparse {

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 300;
  std::uint64_t seed = 0;
};

struct KMeansResult {
  std::vector<int> assignments;
  Matrix centroids;                    // k x d
  double inertia = 0.0;
  int iterations_run = 0;              // Lloyd iterations of the winning restart
  int restart = 0;                     // index of the winning restart
  int repairs = 0;                     // empty-cluster re-seeds in the winning restart
  std::vector<double> inertia_history; // per iteration of the winning restart
  std::uint64_t seed = 0;
};

/// Lloyd's algorithm from k-means++ seeds, best of `restarts` by inertia
/// (ties go to the lower restart index). An emptied cluster is re-seeded at
/// the point farthest from its current centroid.
KMeansResult kmeans(const Matrix& points, int k, const KMeansOptions& options = {});

struct SpectralOptions {
  bool normalized = true;
  bool row_normalize = true;
  const WeightedGraph* filter_graph = nullptr;  // original graph when clustering a sparsifier
  double gamma = 0.7;
  int n_filter = 10;
  double eig_tol = 1e-8;
  int eig_max_iter = 1000;
  KMeansOptions kmeans;
  std::uint64_t seed = 0;  // eigensolver start block
};

struct SpectralTiming {
  double eigensolve_seconds = 0.0;
  double filter_seconds = 0.0;
  double kmeans_seconds = 0.0;
};

struct SpectralResult {
  std::vector<int> labels;
  SpectralEmbedding embedding;  // after filtering when a filter graph was given
  KMeansResult kmeans;
  SpectralTiming timing;
};

/// Bottom-k nontrivial eigenvectors of `graph`, optionally filtered against
/// the original graph, optionally row-normalized, then k-means.
SpectralResult spectral_cluster(const WeightedGraph& graph, int k, const SpectralOptions& options = {});

/// Embedding rows scaled to unit length; zero rows stay zero.
Matrix row_normalized(const Matrix& m);

}  // namespace specsparse
