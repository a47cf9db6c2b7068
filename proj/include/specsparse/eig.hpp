#pragma once

#include "specsparse/graph.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace specsparse {

/// Bottom nontrivial eigenpairs of a (normalized) graph Laplacian.
struct SpectralEmbedding {
  std::vector<double> eigenvalues;  // ascending
  Matrix vectors;                   // n x k, orthonormal columns
  bool normalized = true;
  std::string source;
  std::vector<double> residuals;    // ||(M - zeta I) omega||_2 per pair
  Vector degrees;                   // degree vector used for normalization
  int iterations = 0;
  bool shifted = false;             // filter had to perturb a singular diagonal

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

struct EigOptions {
  bool normalized = true;
  double tol = 1e-8;  // residual target relative to ||M||_inf
  int max_iter = 1000;
  std::uint64_t seed = 0;
  int oversample = -1;             // extra block columns; -1 picks max(k, 10)
  const Matrix* initial = nullptr; // optional warm-start block
  std::string source;
};

/// D^{-1/2} L D^{-1/2}; requires positive degrees.
SparseMatrix normalized_laplacian(const WeightedGraph& g);

/// Max absolute row sum.
double infinity_norm(const SparseMatrix& m);

/// k smallest nontrivial eigenpairs by block inverse iteration on
/// M + zI (z = 1e-8 trace(M)/n) with the trivial eigenvector deflated and a
/// Rayleigh-Ritz extraction after every sweep. Converged when every
/// requested pair has ||M w - zeta w|| <= tol ||M||_inf.
///
/// Throws ConnectivityError for a disconnected graph, ParameterError unless
/// 1 <= k < n, ConvergenceError (with best residuals) after max_iter sweeps.
SpectralEmbedding bottom_eigenpairs(const WeightedGraph& graph, int k, const EigOptions& options = {});

/// Weighted-Jacobi smoothing of each eigenvector against the original graph:
///   w <- (1 - gamma) w + gamma (D_G - zeta I)^{-1} A_G w
/// followed by deflation and renormalization, `sweeps` times per column. For
/// normalized embeddings the sweep runs on v = D^{-1/2} w with the diagonal
/// (1 - zeta) D_G, which is the same update for the problem L v = zeta D v.
/// The input embedding is not modified.
SpectralEmbedding filter_eigenvectors(const WeightedGraph& g, const SpectralEmbedding& embedding, double gamma,
                                      int sweeps);

/// ||(M - zeta_j I) w_j||_2 for each column, M the Laplacian of `g` matching
/// the embedding's normalization.
std::vector<double> embedding_residuals(const WeightedGraph& g, const Matrix& vectors,
                                        std::span<const double> eigenvalues, bool normalized);

/// ||prev - curr|| / ||prev||.
double eigenvalue_variation_ratio(std::span<const double> prev, std::span<const double> curr);

}  // namespace specsparse
