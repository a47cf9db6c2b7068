#pragma once

#include "specsparse/graph.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <memory>

namespace specsparse {

/// Sparse LDL^T factorization of M + z I for a symmetric positive
/// semidefinite M with a known one-dimensional null vector `trivial`.
///
/// z = 1e-8 * trace(M) / n. Right-hand sides are projected against `trivial`
/// before and after the solve, so on the complement the operator behaves as
/// the pseudoinverse up to a relative O(z / eigenvalue) perturbation.
class RegularizedSolver {
 public:
  RegularizedSolver(const SparseMatrix& m, Vector trivial);

  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;

  double shift() const { return shift_; }
  const Vector& trivial() const { return trivial_; }
  int size() const { return static_cast<int>(trivial_.size()); }

 private:
  using Factor = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;
  std::unique_ptr<Factor> factor_;
  Vector trivial_;  // unit norm
  double shift_ = 0.0;
};

/// Regularized solver for a graph Laplacian (trivial vector = all-ones).
RegularizedSolver laplacian_solver(const WeightedGraph& g);

/// x - (t^T x) t for unit t.
inline void deflate(Vector& x, const Vector& unit_trivial) { x -= unit_trivial.dot(x) * unit_trivial; }

inline Vector ones_unit(int n) { return Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))); }

}  // namespace specsparse
