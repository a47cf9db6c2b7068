#include "specsparse/cluster.hpp"

#include "specsparse/errors.hpp"
#include "specsparse/random.hpp"

#include <chrono>
#include <limits>

namespace specsparse {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Matrix plus_plus_seeds(const Matrix& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Matrix c(k, x.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  c.row(0) = x.row(pick(rng));
  Vector d2 = (x.rowwise() - c.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int j = 1; j < k; ++j) {
    const double total = d2.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      double r = unit(rng) * total;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        r -= d2[i];
        if (r < 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    c.row(j) = x.row(chosen);
    d2 = d2.cwiseMin((x.rowwise() - c.row(j)).rowwise().squaredNorm());
  }
  return c;
}

// Returns inertia; fills `assign` and `dist` (squared distance to the assigned centroid).
double assign_points(const Matrix& x, const Matrix& c, std::vector<int>& assign, Vector& dist) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < c.rows(); ++j) {
      const double d = (x.row(i) - c.row(j)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    assign[static_cast<std::size_t>(i)] = best;
    dist[i] = best_d;
    inertia += best_d;
  }
  return inertia;
}

KMeansResult lloyd(const Matrix& x, int k, int max_iter, Rng& rng) {
  const Eigen::Index n = x.rows();
  KMeansResult r;
  r.centroids = plus_plus_seeds(x, k, rng);
  r.assignments.assign(static_cast<std::size_t>(n), -1);
  Vector dist(n);
  std::vector<int> prev;
  for (int it = 1; it <= max_iter; ++it) {
    prev = r.assignments;
    r.inertia = assign_points(x, r.centroids, r.assignments, dist);

    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int a : r.assignments) ++counts[static_cast<std::size_t>(a)];
    for (int j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) continue;
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (counts[static_cast<std::size_t>(r.assignments[static_cast<std::size_t>(i)])] > 1 && dist[i] > far_d) {
          far_d = dist[i];
          far = i;
        }
      }
      --counts[static_cast<std::size_t>(r.assignments[static_cast<std::size_t>(far)])];
      r.assignments[static_cast<std::size_t>(far)] = j;
      counts[static_cast<std::size_t>(j)] = 1;
      r.centroids.row(j) = x.row(far);
      r.inertia -= dist[far];
      dist[far] = 0.0;
      ++r.repairs;
    }
    r.inertia_history.push_back(r.inertia);
    r.iterations_run = it;

    Matrix sums = Matrix::Zero(k, x.cols());
    for (Eigen::Index i = 0; i < n; ++i) sums.row(r.assignments[static_cast<std::size_t>(i)]) += x.row(i);
    for (int j = 0; j < k; ++j) r.centroids.row(j) = sums.row(j) / counts[static_cast<std::size_t>(j)];
    if (r.assignments == prev) break;
  }
  // Inertia against the final centroids.
  r.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    r.inertia += (x.row(i) - r.centroids.row(r.assignments[static_cast<std::size_t>(i)])).squaredNorm();
  return r;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, const KMeansOptions& options) {
  if (k < 1) throw ParameterError("k must be positive");
  if (k > points.rows()) throw ParameterError("k exceeds the number of points");
  if (options.restarts < 1 || options.max_iter < 1) throw ParameterError("restarts and max_iter must be positive");
  if (!points.allFinite()) throw NumericalError("non-finite point coordinates");

  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < options.restarts; ++rep) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(rep)));
    auto r = lloyd(points, k, options.max_iter, rng);
    if (r.inertia < best.inertia) {
      best = std::move(r);
      best.restart = rep;
    }
  }
  best.seed = options.seed;
  return best;
}

Matrix row_normalized(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0) out.row(i) /= norm;
  }
  return out;
}

SpectralResult spectral_cluster(const WeightedGraph& graph, int k, const SpectralOptions& options) {
  if (k < 2) throw ParameterError("spectral clustering needs k >= 2");
  SpectralResult out;

  auto start = Clock::now();
  EigOptions eo;
  eo.normalized = options.normalized;
  eo.tol = options.eig_tol;
  eo.max_iter = options.eig_max_iter;
  eo.seed = options.seed;
  eo.source = "graph";
  out.embedding = bottom_eigenpairs(graph, k, eo);
  out.timing.eigensolve_seconds = seconds_since(start);

  if (options.filter_graph) {
    start = Clock::now();
    out.embedding = filter_eigenvectors(*options.filter_graph, out.embedding, options.gamma, options.n_filter);
    out.timing.filter_seconds = seconds_since(start);
  }

  start = Clock::now();
  const Matrix x = options.row_normalize ? row_normalized(out.embedding.vectors) : out.embedding.vectors;
  out.kmeans = kmeans(x, k, options.kmeans);
  out.labels = out.kmeans.assignments;
  out.timing.kmeans_seconds = seconds_since(start);
  return out;
}

}  // namespace specsparse
