#pragma once

#include "specsparse/graph.hpp"
#include "specsparse/solver.hpp"

#include <cstdint>
#include <optional>

namespace specsparse {

/// Approximate dominant generalized eigenvector of the pencil (L_G, L_S).
///
/// `h_t` is orthogonal to the all-ones vector and scaled to h^T L_S h = 1, the
/// normalization under which the first-order weight sensitivity of lambda_1
/// is -lambda_1 (e_pq^T h)^2.
struct GeneralizedEigenEstimate {
  Vector h_t;
  int t = 0;
  double lambda_1_est = 0.0;
  double lambda_n_est = 0.0;
};

/// h <- deflate(solve_S(L_G h)), normalized, `t` times, starting from `h0`.
/// Returns the Euclidean-normalized iterate.
Vector generalized_power_vector(const WeightedGraph& g, const RegularizedSolver& s_solver,
                                const Vector& h0, int t);

/// x^T L_G x / x^T L_S x.
double pencil_rayleigh(const WeightedGraph& g, const WeightedGraph& s, const Vector& x);

/// Seeded standard-normal start vector, deflated and normalized.
Vector random_start(int n, std::uint64_t seed);

/// Largest pencil eigenvalue by `iters` generalized power iterations. When
/// `warm` holds a vector of matching length it is used as the start and
/// receives the final iterate.
double estimate_lambda_max(const WeightedGraph& g, const WeightedGraph& s, const RegularizedSolver& s_solver,
                           int iters, std::uint64_t seed, Vector* warm = nullptr);

/// Smallest nonzero pencil eigenvalue by power iteration on L_G^+ L_S.
double estimate_lambda_min(const WeightedGraph& g, const WeightedGraph& s, const RegularizedSolver& g_solver,
                           int iters, std::uint64_t seed, Vector* warm = nullptr);

/// Number of inverse iterations used for lambda_n estimates.
inline constexpr int kLambdaMinIterations = 20;

/// t rounds of generalized power iteration from a seeded random start;
/// lambda_n from inverse iteration on the reversed pencil. Throws
/// ParameterError for t < 1, ConnectivityError when S is disconnected.
GeneralizedEigenEstimate generalized_power_iterate(const WeightedGraph& g, const WeightedGraph& s, int t,
                                                   std::uint64_t seed);

/// w (h_t(p) - h_t(q))^2.
double edge_criticality(const GeneralizedEigenEstimate& estimate, EdgeVector edge, double w);

/// First-order d lambda_1 / d w_pq = -lambda_1 (h(p) - h(q))^2 for an
/// L_S-normalized h.
inline double edge_sensitivity(double lambda_1, const Vector& h, EdgeVector edge) {
  const double d = h[edge.p] - h[edge.q];
  return -lambda_1 * d * d;
}

struct ConditionMetrics {
  double lambda_1 = 0.0;
  double lambda_n = 0.0;
  double kappa = 0.0;
  bool approximate = false;
};

struct ConditionOptions {
  int dense_cap = 1500;          // largest n solved exactly
  bool allow_approximate = true; // otherwise SizeError above the cap
  int iterations = 50;           // power / inverse iterations in approximate mode
  std::uint64_t seed = 0;
};

/// Extreme eigenvalues of L_S^+ L_G on the complement of the all-ones vector
/// and kappa = lambda_1 / lambda_n. Exact (dense generalized eigensolve) up to
/// `dense_cap` vertices, iterative estimates above it.
ConditionMetrics condition_metrics(const WeightedGraph& g, const WeightedGraph& s,
                                   const ConditionOptions& options = {});

}  // namespace specsparse
