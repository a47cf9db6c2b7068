#include "specsparse/eval.hpp"

#include "specsparse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specsparse {
namespace {

std::vector<int> distinct(std::span<const int> xs) {
  std::vector<int> out(xs.begin(), xs.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int index_of(const std::vector<int>& sorted, int x) {
  return static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

}  // namespace

// Shortest augmenting path formulation (potentials u, v; 1-based with a
// virtual column 0) minimizing max - weight.
std::vector<int> hungarian_max(const std::vector<std::vector<double>>& weight) {
  const int n = static_cast<int>(weight.size());
  if (n == 0) return {};
  double top = 0.0;
  for (const auto& row : weight) {
    if (static_cast<int>(row.size()) != n) throw DimensionError("assignment matrix must be square");
    for (double w : row) top = std::max(top, w);
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = (top - weight[i0 - 1][j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> col_of_row(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j]) col_of_row[p[j] - 1] = j - 1;
  return col_of_row;
}

AccuracyReport clustering_accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw DimensionError("label vectors differ in length");
  if (predicted.empty()) throw ParameterError("no labels to compare");

  AccuracyReport r;
  r.n = static_cast<int>(predicted.size());
  r.cluster_ids = distinct(predicted);
  r.truth_ids = distinct(truth);
  const int k = static_cast<int>(r.cluster_ids.size());
  const int c = static_cast<int>(r.truth_ids.size());
  r.confusion.assign(static_cast<std::size_t>(c), std::vector<int>(static_cast<std::size_t>(k), 0));
  for (std::size_t i = 0; i < predicted.size(); ++i)
    ++r.confusion[static_cast<std::size_t>(index_of(r.truth_ids, truth[i]))]
                 [static_cast<std::size_t>(index_of(r.cluster_ids, predicted[i]))];

  const int size = std::max(k, c);
  std::vector<std::vector<double>> w(static_cast<std::size_t>(size), std::vector<double>(static_cast<std::size_t>(size), 0.0));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < c; ++b) w[a][b] = r.confusion[b][a];
  const auto match = hungarian_max(w);

  r.mapping.assign(static_cast<std::size_t>(k), -1);
  for (int a = 0; a < k; ++a) {
    const int b = match[static_cast<std::size_t>(a)];
    if (b < c) {
      r.mapping[static_cast<std::size_t>(a)] = b;
      r.matched += r.confusion[b][a];
    }
  }
  r.acc = static_cast<double>(r.matched) / r.n;
  return r;
}

Aggregate averaged_run(const std::function<RunOutcome(std::uint64_t)>& run, int runs, std::uint64_t master_seed) {
  if (runs < 1) throw ParameterError("runs must be >= 1");
  Aggregate a;
  a.runs = runs;
  for (int i = 0; i < runs; ++i) {
    const std::uint64_t seed = master_seed + static_cast<std::uint64_t>(i);
    RunOutcome o;
    try {
      o = run(seed);
    } catch (const std::exception& e) {
      throw Error("run with seed " + std::to_string(seed) + " failed: " + e.what());
    }
    a.accs.push_back(o.acc);
    for (const auto& [name, t] : o.timings) a.timings_mean[name] += t / runs;
  }
  for (double x : a.accs) a.acc_mean += x;
  a.acc_mean /= runs;
  double var = 0.0;
  for (double x : a.accs) var += (x - a.acc_mean) * (x - a.acc_mean);
  a.acc_std = runs > 1 ? std::sqrt(var / runs) : 0.0;
  return a;
}

}  // namespace specsparse
