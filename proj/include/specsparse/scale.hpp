#pragma once

#include "specsparse/graph.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace specsparse {

enum class ClampRule {
  Literal,        // dw = min over endpoints of d_G / Delta - d_S
  LambdaScaled,   // dw = min over endpoints of d_G / (lambda_n Delta) - d_S, puts phi exactly on the floor
};

struct ScaleParams {
  double delta_bar_lambda_n = 0.5;
  double beta = 0.5;
  double eta_max = 0.2;
  double epsilon = 0.01;
  int n_max = 100;
  int t = 2;
  std::uint64_t seed = 0;
  int estimator_iterations = 30;  // first lambda_1 / lambda_n estimate; later ones are warm-started
  int refresh_iterations = 50;
  int max_halvings = 10;  // backtracking steps on the lambda_n floor before giving up
  ClampRule clamp = ClampRule::LambdaScaled;
};

struct ScaleIteration {
  int k = 0;
  double lambda_1 = 0.0;  // after this iteration's sweep
  double lambda_n = 0.0;
  double max_abs_dw = 0.0;
  double eta = 0.0;       // step used in this sweep
  int clamped_edges = 0;
  double step = 1.0;      // multiplier on the momentum update after backtracking
  int halvings = 0;
  bool reverted = false;  // sweep undone because lambda_n stayed below the floor
};

struct ScalingState {
  std::vector<double> w;        // per subgraph edge, in subgraph edge order
  std::vector<double> delta_w;
  Vector d_S;
  Vector d_G;
  double lambda_1_0 = 0.0;      // at loop entry, i.e. after the initial scaling
  double lambda_n_0 = 0.0;
  double lambda_n_floor = 0.0;  // delta_bar_lambda_n times the reference lambda_n
  double lambda_1_k = 0.0;
  double lambda_n_k = 0.0;
  double eta_k = 0.0;
  int k = 0;                    // sweeps performed
  bool converged = false;       // exited on the relative-change test
  bool floor_hit = false;       // exited because a sweep broke the lambda_n floor
  std::vector<ScaleIteration> history;
};

struct ScaleResult {
  WeightedGraph scaled;
  ScalingState state;
  double initial_factor = 1.0;  // 1 when sgd_scale is called directly
};

/// Degree-ratio guard for one edge update. With phi = min over the
/// endpoints of d_G / (d_S + dw), an update with phi <= lambda_n * delta is
/// replaced by the largest update keeping both ratios at the bound the rule
/// selects. Sets *clamped when it fires.
double clamp_update(double dw, double d_G_p, double d_G_q, double d_S_p, double d_S_q, double lambda_n,
                    double delta, ClampRule rule, bool* clamped = nullptr);

/// sqrt(lambda_1 / lambda_n) / 10.
double initial_scale_factor(double lambda_1_0, double lambda_n_0);

/// Every edge weight of S times initial_scale_factor.
WeightedGraph initial_scale(const WeightedGraph& s, double lambda_1_0, double lambda_n_0);

/// Momentum SGD on the edge weights of S (a connected subgraph of G on the
/// same vertices) minimizing the dominant pencil eigenvalue, with the
/// per-edge degree-ratio clamp keeping lambda_n above its floor. Edges are
/// swept in ascending (u, v) order and degrees updated after every edge.
///
/// `lambdas` gives lambda_1, lambda_n of (G, S) when the caller already has
/// them; otherwise they are estimated. The clamp alone does not bound
/// lambda_n (phi(p) is the pencil Rayleigh quotient of e_p, never below
/// lambda_n), so a sweep whose lambda_n estimate drops under
/// delta_bar_lambda_n * lambda_n_ref is redone with the update halved, up to
/// max_halvings times; after that it is undone and the loop stops.
/// `lambda_n_ref` defaults to the entry lambda_n.
ScaleResult sgd_scale(const WeightedGraph& g, const WeightedGraph& s, const ScaleParams& params = {},
                      std::optional<std::pair<double, double>> lambdas = std::nullopt,
                      std::optional<double> lambda_n_ref = std::nullopt);

/// Estimate the extreme pencil eigenvalues, apply initial_scale, then
/// sgd_scale. The returned state's lambda_*_0 and the lambda_n floor refer
/// to the uniformly scaled subgraph: for sqrt(kappa) / 10 > 1 / delta_bar the
/// initial step alone already takes lambda_n below delta_bar times its
/// unscaled value.
ScaleResult scale_subgraph(const WeightedGraph& g, const WeightedGraph& s, const ScaleParams& params = {});

}  // namespace specsparse
