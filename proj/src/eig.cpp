#include "specsparse/eig.hpp"

#include "specsparse/errors.hpp"
#include "specsparse/random.hpp"
#include "specsparse/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace specsparse {
namespace {

Matrix orthonormalize(const Matrix& y) {
  Eigen::HouseholderQR<Matrix> qr(y);
  return qr.householderQ() * Matrix::Identity(y.rows(), y.cols());
}

// Largest-magnitude entry of every column made positive.
void fix_signs(Matrix& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index idx = 0;
    v.col(c).cwiseAbs().maxCoeff(&idx);
    if (v(idx, c) < 0.0) v.col(c) = -v.col(c);
  }
}

Vector trivial_vector(const WeightedGraph& g, bool normalized) {
  Vector t = normalized ? Vector(g.degrees().cwiseSqrt()) : Vector::Ones(g.num_vertices());
  return t.normalized();
}

SparseMatrix operator_for(const WeightedGraph& g, bool normalized) {
  return normalized ? normalized_laplacian(g) : g.laplacian();
}

}  // namespace

SparseMatrix normalized_laplacian(const WeightedGraph& g) {
  const Vector& d = g.degrees();
  if ((d.array() <= 0.0).any()) throw ConnectivityError("isolated vertex in normalized Laplacian");
  const Vector inv_sqrt = d.cwiseSqrt().cwiseInverse();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * static_cast<std::size_t>(g.num_edges()) + static_cast<std::size_t>(g.num_vertices()));
  for (const auto& e : g.edges()) {
    const double v = -e.w * inv_sqrt[e.u] * inv_sqrt[e.v];
    t.emplace_back(e.u, e.v, v);
    t.emplace_back(e.v, e.u, v);
  }
  for (int p = 0; p < g.num_vertices(); ++p) t.emplace_back(p, p, 1.0);
  SparseMatrix m(g.num_vertices(), g.num_vertices());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double infinity_norm(const SparseMatrix& m) {
  Vector rows = Vector::Zero(m.rows());
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

SpectralEmbedding bottom_eigenpairs(const WeightedGraph& graph, int k, const EigOptions& options) {
  const int n = graph.num_vertices();
  if (k < 1 || k >= n) throw ParameterError("bottom_eigenpairs needs 1 <= k < n");
  if (!is_connected(graph)) throw ConnectivityError("eigensolve requires a connected graph");
  if (!(options.tol > 0.0) || options.max_iter < 1) throw ParameterError("bad eigensolver tolerance or iteration cap");

  const SparseMatrix m = operator_for(graph, options.normalized);
  const double norm_inf = infinity_norm(m);
  const RegularizedSolver solver(m, trivial_vector(graph, options.normalized));
  const Vector& trivial = solver.trivial();

  const int extra = options.oversample >= 0 ? options.oversample : std::max(k, 10);
  int block = std::min(n - 1, k + extra);

  Matrix x = random_normal(n, block, options.seed);
  if (options.initial && options.initial->rows() == n) {
    const auto cols = std::min<Eigen::Index>(options.initial->cols(), block);
    x.leftCols(cols) = options.initial->leftCols(cols);
  }
  x -= trivial * (trivial.transpose() * x);
  x = orthonormalize(x);

  const double target = options.tol * norm_inf;
  std::vector<double> best(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());
  Vector theta;
  Matrix ritz;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const Matrix q = orthonormalize(solver.solve(x));
    const Matrix mq = m * q;
    Matrix h = q.transpose() * mq;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    theta = es.eigenvalues();
    ritz = q * es.eigenvectors();
    x = ritz;
    // A cluster wider than the block stalls the residual; widen the block.
    if (iter % 50 == 0 && block < n - 1) {
      const int grown = std::min(n - 1, 2 * block);
      Matrix wider(n, grown);
      wider << x, random_normal(n, grown - block, derive_seed(options.seed, static_cast<std::uint64_t>(iter)));
      wider -= trivial * (trivial.transpose() * wider);
      block = grown;
      x = orthonormalize(wider);
    }

    const Matrix resid = mq * es.eigenvectors().leftCols(k) - ritz.leftCols(k) * theta.head(k).asDiagonal();
    bool converged = true;
    for (int j = 0; j < k; ++j) {
      const double r = resid.col(j).norm();
      best[static_cast<std::size_t>(j)] = r;
      converged = converged && r <= target;
    }
    if (converged) {
      SpectralEmbedding out;
      out.normalized = options.normalized;
      out.source = options.source;
      out.iterations = iter;
      out.degrees = graph.degrees();
      out.vectors = ritz.leftCols(k);
      fix_signs(out.vectors);
      out.eigenvalues.assign(theta.data(), theta.data() + k);
      out.residuals = best;
      return out;
    }
  }
  throw ConvergenceError("eigensolver did not converge in " + std::to_string(options.max_iter) + " sweeps",
                         best);
}

std::vector<double> embedding_residuals(const WeightedGraph& g, const Matrix& vectors,
                                        std::span<const double> eigenvalues, bool normalized) {
  const SparseMatrix m = operator_for(g, normalized);
  std::vector<double> out;
  out.reserve(eigenvalues.size());
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
    const auto col = vectors.col(static_cast<Eigen::Index>(j));
    out.push_back((m * col - eigenvalues[j] * col).norm());
  }
  return out;
}

SpectralEmbedding filter_eigenvectors(const WeightedGraph& g, const SpectralEmbedding& embedding, double gamma,
                                      int sweeps) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("filter weight gamma must lie in (0, 1]");
  if (sweeps < 0) throw ParameterError("negative sweep count");
  const int n = g.num_vertices();
  if (embedding.vectors.rows() != n) throw DimensionError("embedding does not match graph size");

  const Vector& dg = g.degrees();
  if ((dg.array() <= 0.0).any()) throw ConnectivityError("isolated vertex in filter graph");
  const SparseMatrix a = g.adjacency();
  const bool normalized = embedding.normalized;
  const Vector trivial = trivial_vector(g, normalized);

  SpectralEmbedding out = embedding;
  out.degrees = dg;
  Vector source_scale = Vector::Ones(n);  // maps input columns to sweep coordinates
  if (normalized) {
    const Vector& ds = embedding.degrees.size() == n ? embedding.degrees : dg;
    source_scale = ds.cwiseSqrt().cwiseInverse();
  }
  const Vector dg_sqrt = dg.cwiseSqrt();
  const double dmax = dg.maxCoeff();

  for (int j = 0; j < embedding.size(); ++j) {
    double zeta = embedding.eigenvalues[static_cast<std::size_t>(j)];
    auto diagonal = [&](double z) -> Vector {
      return normalized ? Vector((1.0 - z) * dg) : Vector(dg.array() - z);
    };
    Vector diag = diagonal(zeta);
    if ((diag.array() == 0.0).any()) {
      zeta += 1e-12 * (normalized ? 1.0 : dmax);
      diag = diagonal(zeta);
      out.shifted = true;
    }
    const Vector inv_diag = diag.cwiseInverse();

    Vector w = embedding.vectors.col(j);
    Vector v = w.cwiseProduct(source_scale);
    for (int s = 0; s < sweeps; ++s) {
      v = (1.0 - gamma) * v + gamma * inv_diag.cwiseProduct(a * v);
      w = normalized ? Vector(v.cwiseProduct(dg_sqrt)) : v;
      deflate(w, trivial);
      const double norm = w.norm();
      if (!(norm > 0.0) || !w.allFinite()) throw NumericalError("filter produced a degenerate vector");
      w /= norm;
      v = normalized ? Vector(w.cwiseQuotient(dg_sqrt)) : w;
    }
    if (sweeps == 0) {
      w = normalized ? Vector(v.cwiseProduct(dg_sqrt)) : v;
      deflate(w, trivial);
      w.normalize();
    }
    out.vectors.col(j) = w;
  }
  out.residuals = embedding_residuals(g, out.vectors, out.eigenvalues, normalized);
  out.source = embedding.source + "+filtered";
  return out;
}

double eigenvalue_variation_ratio(std::span<const double> prev, std::span<const double> curr) {
  if (prev.size() != curr.size()) throw DimensionError("eigenvalue vectors differ in length");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < prev.size(); ++i) {
    num += (prev[i] - curr[i]) * (prev[i] - curr[i]);
    den += prev[i] * prev[i];
  }
  if (!(den > 0.0)) throw ParameterError("previous eigenvalue vector is zero");
  return std::sqrt(num) / std::sqrt(den);
}

}  // namespace specsparse
