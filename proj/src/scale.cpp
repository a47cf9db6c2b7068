#include "specsparse/scale.hpp"

#include "specsparse/errors.hpp"
#include "specsparse/pencil.hpp"
#include "specsparse/random.hpp"
#include "specsparse/solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace specsparse {
namespace {

void check_params(const ScaleParams& p) {
  if (!(p.delta_bar_lambda_n > 0.0 && p.delta_bar_lambda_n <= 1.0))
    throw ParameterError("delta_bar_lambda_n must lie in (0, 1]");
  if (!(p.beta >= 0.0 && p.beta < 1.0)) throw ParameterError("beta must lie in [0, 1)");
  if (!(p.eta_max > 0.0)) throw ParameterError("eta_max must be positive");
  if (!(p.epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (p.n_max < 1) throw ParameterError("n_max must be >= 1");
  if (p.t < 1) throw ParameterError("t must be >= 1");
  if (p.max_halvings < 0) throw ParameterError("max_halvings must be >= 0");
  if (p.estimator_iterations < 1 || p.refresh_iterations < 1) throw ParameterError("estimator iterations must be >= 1");
}

std::string dump(const std::vector<ScaleIteration>& history) {
  std::ostringstream os;
  for (const auto& it : history)
    os << "\n  k=" << it.k << " lambda_1=" << it.lambda_1 << " lambda_n=" << it.lambda_n
       << " max|dw|=" << it.max_abs_dw << " eta=" << it.eta;
  return os.str();
}

}  // namespace

double clamp_update(double dw, double d_G_p, double d_G_q, double d_S_p, double d_S_q, double lambda_n,
                    double delta, ClampRule rule, bool* clamped) {
  const double phi = std::min(d_G_p / (d_S_p + dw), d_G_q / (d_S_q + dw));
  const bool fire = phi <= lambda_n * delta;
  if (clamped) *clamped = fire;
  if (!fire) return dw;
  const double scale = rule == ClampRule::Literal ? delta : lambda_n * delta;
  return std::min(d_G_p / scale - d_S_p, d_G_q / scale - d_S_q);
}

double initial_scale_factor(double lambda_1_0, double lambda_n_0) {
  if (!(lambda_n_0 > 0.0) || !(lambda_1_0 > 0.0) || !std::isfinite(lambda_1_0))
    throw ParameterError("eigenvalue estimates must be positive");
  if (lambda_1_0 < lambda_n_0) throw ParameterError("lambda_1 below lambda_n");
  return std::sqrt(lambda_1_0 / lambda_n_0) / 10.0;
}

WeightedGraph initial_scale(const WeightedGraph& s, double lambda_1_0, double lambda_n_0) {
  const double c = initial_scale_factor(lambda_1_0, lambda_n_0);
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(s.num_edges()));
  for (const auto& e : s.edges()) w.push_back(e.w * c);
  return s.with_weights(w);
}

ScaleResult sgd_scale(const WeightedGraph& g, const WeightedGraph& s, const ScaleParams& params,
                      std::optional<std::pair<double, double>> lambdas, std::optional<double> lambda_n_ref) {
  check_params(params);
  const int n = g.num_vertices();
  if (s.num_vertices() != n) throw DimensionError("graphs have different vertex counts");
  if (!is_connected(g) || !is_connected(s)) throw ConnectivityError("scaling needs connected graphs");
  for (const auto& e : s.edges())
    if (!g.find_edge(e.u, e.v)) throw ParameterError("subgraph edge missing from the original graph");

  const RegularizedSolver g_solver = laplacian_solver(g);
  WeightedGraph current = s;
  auto s_solver = std::make_unique<RegularizedSolver>(laplacian_solver(current));

  Vector warm_max, warm_min;
  ScalingState st;
  if (lambdas) {
    st.lambda_1_0 = lambdas->first;
    st.lambda_n_0 = lambdas->second;
  } else {
    st.lambda_1_0 = estimate_lambda_max(g, current, *s_solver, params.estimator_iterations,
                                        derive_seed(params.seed, 0), &warm_max);
    st.lambda_n_0 = estimate_lambda_min(g, current, g_solver, params.estimator_iterations,
                                        derive_seed(params.seed, 1), &warm_min);
  }
  if (!(st.lambda_n_0 > 0.0) || !std::isfinite(st.lambda_1_0))
    throw NumericalError("invalid initial eigenvalue estimates");

  st.lambda_n_floor = params.delta_bar_lambda_n * lambda_n_ref.value_or(st.lambda_n_0);
  const double delta = std::pow(params.delta_bar_lambda_n, 1.0 / params.n_max);
  st.d_G = g.degrees();
  st.d_S = current.degrees();
  st.w.reserve(static_cast<std::size_t>(current.num_edges()));
  for (const auto& e : current.edges()) st.w.push_back(e.w);
  st.delta_w.assign(st.w.size(), 0.0);
  st.lambda_1_k = st.lambda_1_0;
  st.lambda_n_k = st.lambda_n_0;
  st.eta_k = params.eta_max;
  double d_lambda_1 = st.lambda_1_0;

  for (int k = 1; std::abs(d_lambda_1) / st.lambda_1_k >= params.epsilon && k <= params.n_max; ++k) {
    Vector h = generalized_power_vector(g, *s_solver, random_start(n, derive_seed(params.seed, 100 + k)), params.t);
    h /= std::sqrt(laplacian_quadratic(current, h));

    const std::vector<double> w_before = st.w, dw_before = st.delta_w;
    ScaleIteration rec;
    rec.k = k;
    rec.eta = st.eta_k;
    WeightedGraph trial;
    std::unique_ptr<RegularizedSolver> trial_solver;
    Vector trial_max, trial_min;
    double l1 = 0.0, ln = 0.0;
    // Backtracking on the lambda_n floor: halve the whole update and retry.
    for (double step = 1.0;; step *= 0.5) {
      st.w = w_before;
      st.delta_w = dw_before;
      st.d_S = current.degrees();
      rec.step = step;
      rec.clamped_edges = 0;
      rec.max_abs_dw = 0.0;
      const auto& edges = current.edges();
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const int p = edges[e].u, q = edges[e].v;
        const double sens = edge_sensitivity(st.lambda_1_k, h, {p, q});
        bool clamped = false;
        const double dw = clamp_update(step * (params.beta * dw_before[e] - st.eta_k * sens), st.d_G[p], st.d_G[q],
                                       st.d_S[p], st.d_S[q], st.lambda_n_k, delta, params.clamp, &clamped);
        rec.clamped_edges += clamped;
        st.w[e] += dw;
        st.d_S[p] += dw;
        st.d_S[q] += dw;
        st.delta_w[e] = dw;
        rec.max_abs_dw = std::max(rec.max_abs_dw, std::abs(dw));
        if (!(st.w[e] > 0.0)) {
          std::ostringstream os;
          os << "edge (" << p << "," << q << ") weight became " << st.w[e] << " at k=" << k;
          throw std::logic_error(os.str());
        }
      }

      trial = current.with_weights(st.w);
      trial_solver = std::make_unique<RegularizedSolver>(laplacian_solver(trial));
      const int iters_max = warm_max.size() ? params.refresh_iterations : params.estimator_iterations;
      const int iters_min = warm_min.size() ? params.refresh_iterations : params.estimator_iterations;
      trial_max = warm_max;
      trial_min = warm_min;
      l1 = estimate_lambda_max(g, trial, *trial_solver, iters_max, derive_seed(params.seed, 200 + k), &trial_max);
      ln = estimate_lambda_min(g, trial, g_solver, iters_min, derive_seed(params.seed, 300 + k), &trial_min);
      rec.lambda_1 = l1;
      rec.lambda_n = ln;
      st.k = k;
      if (!std::isfinite(l1) || !std::isfinite(ln)) {
        st.history.push_back(rec);
        throw NumericalError("eigenvalue estimate became non-finite" + dump(st.history));
      }
      if (ln >= st.lambda_n_floor) break;
      if (rec.halvings == params.max_halvings) {
        rec.reverted = true;
        break;
      }
      ++rec.halvings;
    }
    if (rec.reverted) {
      st.history.push_back(rec);
      st.w = w_before;
      st.delta_w = dw_before;
      st.d_S = current.degrees();
      st.floor_hit = true;
      break;
    }
    st.history.push_back(rec);
    current = trial;
    st.d_S = current.degrees();
    s_solver = std::move(trial_solver);
    warm_max = std::move(trial_max);
    warm_min = std::move(trial_min);
    const double prev = st.lambda_1_k;
    st.eta_k = prev / st.lambda_1_0 * params.eta_max;
    st.lambda_1_k = l1;
    st.lambda_n_k = ln;
    d_lambda_1 = st.lambda_1_k - prev;
  }
  st.converged = !st.floor_hit && std::abs(d_lambda_1) / st.lambda_1_k < params.epsilon;
  return {current, std::move(st), 1.0};
}

ScaleResult scale_subgraph(const WeightedGraph& g, const WeightedGraph& s, const ScaleParams& params) {
  check_params(params);
  const auto s_solver = laplacian_solver(s);
  const auto g_solver = laplacian_solver(g);
  const double l1 = estimate_lambda_max(g, s, s_solver, params.estimator_iterations, derive_seed(params.seed, 0));
  const double ln = estimate_lambda_min(g, s, g_solver, params.estimator_iterations, derive_seed(params.seed, 1));
  const double c = initial_scale_factor(l1, std::min(ln, l1));
  const WeightedGraph s1 = initial_scale(s, l1, std::min(ln, l1));
  auto out = sgd_scale(g, s1, params, std::make_pair(l1 / c, std::min(ln, l1) / c));
  out.initial_factor = c;
  return out;
}

}  // namespace specsparse
