#include "specsparse/solver.hpp"

#include "specsparse/errors.hpp"

#include <cmath>

namespace specsparse {

RegularizedSolver::RegularizedSolver(const SparseMatrix& m, Vector trivial)
    : factor_(std::make_unique<Factor>()), trivial_(std::move(trivial)) {
  const auto n = m.rows();
  if (m.cols() != n || trivial_.size() != n) throw DimensionError("solver operand size mismatch");
  if (n == 0) throw DimensionError("empty operator");
  trivial_.normalize();
  shift_ = 1e-8 * m.diagonal().sum() / static_cast<double>(n);
  if (!(shift_ > 0.0)) throw NumericalError("operator has zero trace");
  SparseMatrix shifted = m;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) += shift_;
  factor_->compute(shifted);
  if (factor_->info() != Eigen::Success) throw NumericalError("sparse factorization failed");
}

Vector RegularizedSolver::solve(const Vector& b) const {
  Vector rhs = b;
  deflate(rhs, trivial_);
  Vector x = factor_->solve(rhs);
  if (!x.allFinite()) throw NumericalError("non-finite solve result");
  deflate(x, trivial_);
  return x;
}

Matrix RegularizedSolver::solve(const Matrix& b) const {
  Matrix rhs = b;
  rhs -= trivial_ * (trivial_.transpose() * rhs);
  Matrix x = factor_->solve(rhs);
  if (!x.allFinite()) throw NumericalError("non-finite solve result");
  x -= trivial_ * (trivial_.transpose() * x);
  return x;
}

RegularizedSolver laplacian_solver(const WeightedGraph& g) {
  return RegularizedSolver(g.laplacian(), Vector::Ones(g.num_vertices()));
}

}  // namespace specsparse
