#include "specsparse/sparsify.hpp"

#include "specsparse/eig.hpp"
#include "specsparse/errors.hpp"
#include "specsparse/pencil.hpp"
#include "specsparse/random.hpp"
#include "specsparse/solver.hpp"

#include <algorithm>
#include <cmath>

namespace specsparse {
namespace {

struct Scored {
  double score;
  EdgeId edge;
};

}  // namespace

Sparsifier recover_off_tree_edges(const WeightedGraph& g, const SpanningTree& tree, const RecoveryOptions& options) {
  const int n = g.num_vertices();
  if (tree.num_vertices() != n) throw DimensionError("tree does not match graph");
  if (!(options.budget >= 0.0)) throw ParameterError("budget must be non-negative");
  if (!(options.batch_fraction > 0.0)) throw ParameterError("batch fraction must be positive");
  if (options.k_eigs < 2) throw ParameterError("stability check needs k_eigs >= 2");
  if (options.t < 1) throw ParameterError("t must be >= 1");
  if (options.k_eigs >= n) throw ParameterError("k_eigs must be below the vertex count");

  Sparsifier out;
  out.seed = options.seed;

  std::vector<bool> in_subgraph(static_cast<std::size_t>(g.num_edges()), false);
  for (EdgeId e : tree.tree_edges()) in_subgraph[e] = true;
  const int off_tree = g.num_edges() - (n - 1);

  int target = static_cast<int>(std::floor(options.budget * n + 1e-9));
  if (target > off_tree) {
    target = off_tree;
    out.clamped = true;
  }
  const int batch = std::max(1, static_cast<int>(std::lround(options.batch_fraction * n)));

  auto rebuild = [&] {
    out.base_edges.clear();
    for (EdgeId e = 0; e < g.num_edges(); ++e)
      if (in_subgraph[e]) out.base_edges.push_back(e);
    out.subgraph = g.subgraph(out.base_edges);
  };
  rebuild();

  Matrix warm;
  auto bottom = [&](int round) {
    EigOptions eo;
    eo.normalized = true;
    eo.tol = options.eig_tol;
    eo.max_iter = options.eig_max_iter;
    eo.seed = derive_seed(options.seed, 1000 + static_cast<std::uint64_t>(round));
    eo.initial = warm.size() ? &warm : nullptr;
    auto emb = bottom_eigenpairs(out.subgraph, options.k_eigs, eo);
    warm = emb.vectors;
    return emb.eigenvalues;
  };

  StabilityRound first;
  first.eigenvalues = bottom(0);
  first.budget = off_tree_budget(out.subgraph);
  out.history.push_back(first);

  Vector h_once;
  int added = 0;
  for (int round = 1; added < target; ++round) {
    Vector h;
    if (options.rank_once && h_once.size()) {
      h = h_once;
    } else {
      const auto solver = laplacian_solver(out.subgraph);
      h = generalized_power_vector(g, solver, random_start(n, derive_seed(options.seed, round)), options.t);
      if (options.rank_once) h_once = h;
    }

    std::vector<Scored> scored;
    scored.reserve(static_cast<std::size_t>(g.num_edges()));
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (in_subgraph[e]) continue;
      const auto& edge = g.edge(e);
      const double d = h[edge.u] - h[edge.v];
      scored.push_back({edge.w * d * d, e});
    }
    const int take = std::min({batch, target - added, static_cast<int>(scored.size())});
    std::partial_sort(scored.begin(), scored.begin() + take, scored.end(), [](const Scored& a, const Scored& b) {
      return a.score != b.score ? a.score > b.score : a.edge < b.edge;
    });
    for (int i = 0; i < take; ++i) {
      in_subgraph[scored[i].edge] = true;
      out.recovered.push_back({scored[i].edge, scored[i].score, round});
    }
    added += take;
    rebuild();

    StabilityRound rec;
    rec.round = round;
    rec.edges_added = take;
    rec.budget = off_tree_budget(out.subgraph);
    rec.eigenvalues = bottom(round);
    rec.ratio_var = eigenvalue_variation_ratio(out.history.back().eigenvalues, rec.eigenvalues);
    out.history.push_back(rec);
    if (*rec.ratio_var < options.stability_tol) {
      out.stable = true;
      break;
    }
  }
  out.budget = off_tree_budget(out.subgraph);
  return out;
}

}  // namespace specsparse
