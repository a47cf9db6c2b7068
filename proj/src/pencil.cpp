#include "specsparse/pencil.hpp"

#include "specsparse/errors.hpp"
#include "specsparse/random.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>

namespace specsparse {
namespace {

void require_same_vertices(const WeightedGraph& g, const WeightedGraph& s) {
  if (g.num_vertices() != s.num_vertices()) throw DimensionError("graphs have different vertex counts");
}

void normalize_or_throw(Vector& x) {
  const double norm = x.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("power iterate collapsed");
  x /= norm;
}

}  // namespace

Vector random_start(int n, std::uint64_t seed) {
  Vector h = random_normal(n, 1, seed).col(0);
  deflate(h, ones_unit(n));
  normalize_or_throw(h);
  return h;
}

Vector generalized_power_vector(const WeightedGraph& g, const RegularizedSolver& s_solver, const Vector& h0,
                                int t) {
  Vector h = h0;
  for (int i = 0; i < t; ++i) {
    h = s_solver.solve(laplacian_apply(g, h));
    normalize_or_throw(h);
  }
  return h;
}

double pencil_rayleigh(const WeightedGraph& g, const WeightedGraph& s, const Vector& x) {
  const double den = laplacian_quadratic(s, x);
  if (!(den > 0.0)) throw NumericalError("zero subgraph quadratic form");
  return laplacian_quadratic(g, x) / den;
}

double estimate_lambda_max(const WeightedGraph& g, const WeightedGraph& s, const RegularizedSolver& s_solver,
                           int iters, std::uint64_t seed, Vector* warm) {
  Vector h = (warm && warm->size() == g.num_vertices()) ? *warm : random_start(g.num_vertices(), seed);
  h = generalized_power_vector(g, s_solver, h, iters);
  if (warm) *warm = h;
  return pencil_rayleigh(g, s, h);
}

double estimate_lambda_min(const WeightedGraph& g, const WeightedGraph& s, const RegularizedSolver& g_solver,
                           int iters, std::uint64_t seed, Vector* warm) {
  Vector x = (warm && warm->size() == g.num_vertices()) ? *warm : random_start(g.num_vertices(), seed);
  for (int i = 0; i < iters; ++i) {
    x = g_solver.solve(laplacian_apply(s, x));
    normalize_or_throw(x);
  }
  if (warm) *warm = x;
  return pencil_rayleigh(g, s, x);
}

GeneralizedEigenEstimate generalized_power_iterate(const WeightedGraph& g, const WeightedGraph& s, int t,
                                                   std::uint64_t seed) {
  require_same_vertices(g, s);
  if (t < 1) throw ParameterError("generalized power iteration needs t >= 1");
  if (!is_connected(s)) throw ConnectivityError("subgraph must be connected");
  const auto s_solver = laplacian_solver(s);
  const auto g_solver = laplacian_solver(g);

  GeneralizedEigenEstimate est;
  est.t = t;
  est.h_t = generalized_power_vector(g, s_solver, random_start(g.num_vertices(), seed), t);
  est.lambda_1_est = pencil_rayleigh(g, s, est.h_t);
  est.h_t /= std::sqrt(laplacian_quadratic(s, est.h_t));
  est.lambda_n_est = estimate_lambda_min(g, s, g_solver, kLambdaMinIterations, derive_seed(seed, 1));
  return est;
}

double edge_criticality(const GeneralizedEigenEstimate& estimate, EdgeVector edge, double w) {
  const double d = estimate.h_t[edge.p] - estimate.h_t[edge.q];
  return w * d * d;
}

ConditionMetrics condition_metrics(const WeightedGraph& g, const WeightedGraph& s, const ConditionOptions& options) {
  require_same_vertices(g, s);
  if (!is_connected(g) || !is_connected(s)) throw ConnectivityError("condition metrics need connected graphs");
  const int n = g.num_vertices();
  if (n < 2) throw ParameterError("need at least two vertices");

  ConditionMetrics out;
  if (n <= options.dense_cap) {
    // Orthonormal basis of the complement of the all-ones vector.
    const Matrix ones = Matrix::Ones(n, 1);
    Eigen::HouseholderQR<Matrix> qr(ones);
    const Matrix q = (qr.householderQ() * Matrix::Identity(n, n)).rightCols(n - 1);
    const Matrix lg = Matrix(g.laplacian());
    const Matrix ls = Matrix(s.laplacian());
    const Matrix a = q.transpose() * lg * q;
    const Matrix b = q.transpose() * ls * q;
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(a, b, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("dense generalized eigensolve failed");
    out.lambda_n = es.eigenvalues()(0);
    out.lambda_1 = es.eigenvalues()(n - 2);
  } else {
    if (!options.allow_approximate)
      throw SizeError("graph exceeds the dense oracle cap of " + std::to_string(options.dense_cap));
    const auto s_solver = laplacian_solver(s);
    const auto g_solver = laplacian_solver(g);
    out.lambda_1 = estimate_lambda_max(g, s, s_solver, options.iterations, derive_seed(options.seed, 0));
    out.lambda_n = estimate_lambda_min(g, s, g_solver, options.iterations, derive_seed(options.seed, 1));
    out.approximate = true;
  }
  out.kappa = out.lambda_1 / out.lambda_n;
  return out;
}

}  // namespace specsparse
