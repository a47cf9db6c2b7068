#include "specsparse/knn.hpp"

#include "specsparse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace specsparse {
namespace {

struct Candidate {
  double dist;
  VertexId j;
  bool operator<(const Candidate& o) const { return dist != o.dist ? dist < o.dist : j < o.j; }
};

double exact_distance(const RowMatrix& x, Eigen::Index i, Eigen::Index j) {
  return (x.row(i) - x.row(j)).norm();
}

// Nearest `m` neighbors of every point, sorted by (distance, index).
std::vector<std::vector<Candidate>> nearest_neighbors(const RowMatrix& x, int m) {
  const Eigen::Index n = x.rows();
  const Vector sq = x.rowwise().squaredNorm();
  const int pool = std::min<int>(m + 4, static_cast<int>(n) - 1);
  constexpr Eigen::Index kBlock = 256;

  std::vector<std::vector<Candidate>> result(static_cast<std::size_t>(n));
  std::vector<Candidate> row;
  row.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index b0 = 0; b0 < n; b0 += kBlock) {
    const Eigen::Index rows = std::min(kBlock, n - b0);
    const Matrix gram = x.middleRows(b0, rows) * x.transpose();
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Eigen::Index i = b0 + r;
      row.clear();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d2 = std::max(0.0, sq[i] + sq[j] - 2.0 * gram(r, j));
        row.push_back({d2, static_cast<VertexId>(j)});
      }
      std::partial_sort(row.begin(), row.begin() + pool, row.end());
      std::vector<Candidate> best(row.begin(), row.begin() + pool);
      for (auto& c : best) c.dist = exact_distance(x, i, c.j);
      std::sort(best.begin(), best.end());
      best.resize(static_cast<std::size_t>(m));
      result[static_cast<std::size_t>(i)] = std::move(best);
    }
  }
  return result;
}

class WeightFn {
 public:
  WeightFn(const KnnOptions& opt, std::vector<double> sigma, double min_positive_distance)
      : opt_(opt), sigma_(std::move(sigma)), min_pos_(min_positive_distance) {}

  double operator()(VertexId i, VertexId j, double d) const {
    double w = 0.0;
    switch (opt_.kernel) {
      case Kernel::SelfTuningGaussian:
        w = std::exp(-d * d / (sigma_[i] * sigma_[j]));
        break;
      case Kernel::Gaussian:
        w = std::exp(-d * d / (2.0 * opt_.sigma * opt_.sigma));
        break;
      case Kernel::DistanceReciprocal:
        w = 1.0 / (d > 0.0 ? d : min_pos_);
        break;
    }
    return std::max(w, std::numeric_limits<double>::min());
  }

 private:
  const KnnOptions& opt_;
  std::vector<double> sigma_;
  double min_pos_;
};

}  // namespace

KnnGraph build_knn_graph(const Dataset& data, const KnnOptions& options) {
  const RowMatrix& x = data.points;
  const int n = static_cast<int>(x.rows());
  if (options.k < 1 || options.k >= n) throw ParameterError("kNN requires 1 <= k < n");
  if (!x.allFinite()) throw ParameterError("non-finite feature values");
  if (options.kernel == Kernel::Gaussian && !(options.sigma > 0.0))
    throw ParameterError("Gaussian kernel requires sigma > 0");
  if (options.self_tuning_rank < 1) throw ParameterError("self-tuning rank must be >= 1");

  const int rank = std::min(options.self_tuning_rank, n - 1);
  const int m = std::max(options.k, rank);
  const auto nn = nearest_neighbors(x, m);

  double min_positive = std::numeric_limits<double>::infinity();
  for (const auto& list : nn)
    for (const auto& c : list)
      if (c.dist > 0.0) min_positive = std::min(min_positive, c.dist);
  if (!std::isfinite(min_positive)) min_positive = 1.0;

  std::vector<double> sigma(static_cast<std::size_t>(n), 0.0);
  std::vector<int> degenerate;
  for (int i = 0; i < n; ++i) {
    sigma[i] = nn[i][static_cast<std::size_t>(rank - 1)].dist;
    if (sigma[i] > 0.0) continue;
    double smallest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = exact_distance(x, i, j);
      if (d > 0.0) smallest = std::min(smallest, d);
    }
    if (std::isfinite(smallest))
      sigma[i] = smallest;
    else
      degenerate.push_back(i);
  }
  if (!degenerate.empty()) {
    double sum = 0.0;
    int count = 0;
    for (double s : sigma)
      if (s > 0.0) sum += s, ++count;
    const double fallback = count ? sum / count : 1.0;
    for (int i : degenerate) sigma[static_cast<std::size_t>(i)] = fallback;
  }
  const WeightFn weight(options, sigma, min_positive);

  // (u, v) -> (distance, number of endpoints that listed the other)
  std::map<std::pair<VertexId, VertexId>, std::pair<double, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < options.k; ++r) {
      const auto& c = nn[i][static_cast<std::size_t>(r)];
      const std::pair<VertexId, VertexId> key{std::min(i, c.j), std::max(i, c.j)};
      auto [it, inserted] = pairs.try_emplace(key, c.dist, 0);
      ++it->second.second;
    }
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [key, val] : pairs) {
    if (options.symmetrization == Symmetrization::Mutual && val.second < 2) continue;
    edges.push_back({key.first, key.second, weight(key.first, key.second, val.first)});
  }

  KnnGraph out{WeightedGraph(n, edges), 0};
  if (!options.repair_connectivity) return out;

  const auto comp = connected_components(out.graph);
  const int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
  if (ncomp == 1) return out;

  std::vector<std::vector<int>> members(static_cast<std::size_t>(ncomp));
  for (int i = 0; i < n; ++i) members[comp[i]].push_back(i);
  Matrix centroid = Matrix::Zero(ncomp, x.cols());
  for (int c = 0; c < ncomp; ++c) {
    for (int i : members[c]) centroid.row(c) += x.row(i);
    centroid.row(c) /= static_cast<double>(members[c].size());
  }

  // Prim over component centroids.
  std::vector<bool> in_tree(static_cast<std::size_t>(ncomp), false);
  std::vector<double> best(static_cast<std::size_t>(ncomp), std::numeric_limits<double>::infinity());
  std::vector<int> link(static_cast<std::size_t>(ncomp), -1);
  best[0] = 0.0;
  for (int step = 0; step < ncomp; ++step) {
    int c = -1;
    for (int j = 0; j < ncomp; ++j)
      if (!in_tree[j] && (c < 0 || best[j] < best[c])) c = j;
    in_tree[c] = true;
    if (link[c] >= 0) {
      double dmin = std::numeric_limits<double>::infinity();
      VertexId bi = -1, bj = -1;
      for (int i : members[link[c]]) {
        for (int j : members[c]) {
          const double d = exact_distance(x, i, j);
          const auto [lo, hi] = std::minmax(i, j);
          if (d < dmin || (d == dmin && std::make_pair(lo, hi) < std::make_pair(std::min(bi, bj), std::max(bi, bj)))) {
            dmin = d;
            bi = i;
            bj = j;
          }
        }
      }
      const auto [lo, hi] = std::minmax(bi, bj);
      edges.push_back({lo, hi, weight(lo, hi, dmin)});
      ++out.repair_edges;
    }
    for (int j = 0; j < ncomp; ++j) {
      if (in_tree[j]) continue;
      const double d = (centroid.row(c) - centroid.row(j)).norm();
      if (d < best[j]) {
        best[j] = d;
        link[j] = c;
      }
    }
  }
  out.graph = WeightedGraph(n, std::move(edges));
  return out;
}

}  // namespace specsparse
