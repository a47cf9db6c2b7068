#include "specsparse/pipeline.hpp"

#include "specsparse/errors.hpp"
#include "specsparse/random.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace specsparse {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Per-run seed streams.
enum Stream : std::uint64_t { kRecovery = 1, kScaling = 2, kEigen = 3, kKmeans = 4 };

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

json config_json(const PipelineConfig& c) {
  json j = json::object();
  j["dataset"] = c.dataset;
  j["format"] = c.format;
  j["label_column"] = c.label_column;
  j["labels"] = c.labels;
  j["standardize"] = c.standardize;
  j["knn_k"] = c.knn_k;
  j["kernel"] = c.kernel;
  j["sigma"] = c.sigma;
  j["self_tuning_rank"] = c.self_tuning_rank;
  j["symmetrization"] = c.symmetrization;
  j["tree"] = c.tree;
  j["budget"] = c.budget;
  j["batch_fraction"] = c.batch_fraction;
  j["stability_tol"] = c.stability_tol;
  j["t"] = c.t;
  j["k_eigs"] = c.k_eigs;
  j["rank_once"] = c.rank_once;
  j["scaling"] = c.scaling;
  j["delta_bar_lambda_n"] = c.delta_bar_lambda_n;
  j["beta"] = c.beta;
  j["eta_max"] = c.eta_max;
  j["epsilon"] = c.epsilon;
  j["n_max"] = c.n_max;
  j["clamp"] = c.clamp;
  j["filter"] = c.filter;
  j["gamma"] = c.gamma;
  j["n_filter"] = c.n_filter;
  j["clusters"] = c.clusters;
  j["restarts"] = c.restarts;
  j["kmeans_max_iter"] = c.kmeans_max_iter;
  j["normalized"] = c.normalized;
  j["row_normalize"] = c.row_normalize;
  j["eig_tol"] = c.eig_tol;
  j["eig_max_iter"] = c.eig_max_iter;
  j["seed"] = c.seed;
  j["runs"] = c.runs;
  j["budget_sweep"] = c.budget_sweep;
  j["condition_report"] = c.condition_report;
  j["workers"] = c.workers;
  j["output"] = c.output;
  return j;
}

json timings_json(const std::map<std::string, double>& t) {
  json j = json::object();
  for (const char* key : {"graph", "sparsify", "scale", "eigensolve", "filter", "kmeans"}) {
    const auto it = t.find(key);
    j[key] = seconds3(it == t.end() ? 0.0 : it->second);
  }
  return j;
}

json aggregate_json(const Aggregate& a) {
  json j;
  j["runs"] = a.runs;
  j["acc_mean"] = percent2(a.acc_mean);
  j["acc_std"] = percent2(a.acc_std);
  j["accs"] = a.accs;
  j["timings"] = timings_json(a.timings_mean);
  return j;
}

json stability_json(const Sparsifier& s, const PipelineConfig& c) {
  json rounds = json::array();
  for (const auto& r : s.history) {
    json jr;
    jr["round"] = r.round;
    jr["budget"] = r.budget;
    jr["edges_added"] = r.edges_added;
    jr["eigenvalues"] = r.eigenvalues;
    jr["ratio_var"] = r.ratio_var ? json(*r.ratio_var) : json(nullptr);
    rounds.push_back(jr);
  }
  json recovered = json::array();
  for (const auto& e : s.recovered) recovered.push_back({{"edge", e.edge}, {"criticality", e.criticality}, {"round", e.round}});
  json j;
  j["rounds"] = rounds;
  j["recovered"] = recovered;
  j["final_budget"] = s.budget;
  j["clamped"] = s.clamped;
  j["stable"] = s.stable;
  j["seed"] = s.seed;
  j["params"] = {{"budget", c.budget},           {"batch_fraction", c.batch_fraction},
                 {"stability_tol", c.stability_tol}, {"t", c.t},
                 {"k_eigs", c.k_eigs ? c.k_eigs : c.clusters}, {"rank_once", c.rank_once}};
  return j;
}

json scaling_json(const ScaleResult& r, const PipelineConfig& c, std::uint64_t seed) {
  json its = json::array();
  for (const auto& it : r.state.history)
    its.push_back({{"k", it.k},
                   {"lambda1", it.lambda_1},
                   {"lambdan", it.lambda_n},
                   {"max_abs_dw", it.max_abs_dw},
                   {"eta", it.eta},
                   {"clamped_edges", it.clamped_edges},
                   {"step", it.step},
                   {"reverted", it.reverted}});
  json j;
  j["iterations"] = its;
  j["initial_factor"] = r.initial_factor;
  j["lambda1_0"] = r.state.lambda_1_0;
  j["lambdan_0"] = r.state.lambda_n_0;
  j["lambdan_floor"] = r.state.lambda_n_floor;
  j["converged"] = r.state.converged;
  j["floor_hit"] = r.state.floor_hit;
  j["params"] = {{"delta_bar_lambda_n", c.delta_bar_lambda_n}, {"beta", c.beta},   {"eta_max", c.eta_max},
                 {"epsilon", c.epsilon},                       {"n_max", c.n_max}, {"t", c.t},
                 {"clamp", c.clamp}};
  j["seed"] = seed;
  return j;
}

json embedding_json(const SpectralEmbedding& e) {
  json j;
  j["eigenvalues"] = e.eigenvalues;
  j["residuals"] = e.residuals;
  j["normalized"] = e.normalized;
  j["source"] = e.source;
  j["iterations"] = e.iterations;
  j["shifted"] = e.shifted;
  return j;
}

json condition_json(const ConditionMetrics& m) {
  return {{"lambda1", m.lambda_1}, {"lambdan", m.lambda_n}, {"kappa", m.kappa}, {"approximate", m.approximate}};
}

class Manifest {
 public:
  explicit Manifest(fs::path path) : path_(std::move(path)) { flush(); }
  void mark(const std::string& stage) {
    stages_.push_back(stage);
    flush();
  }

 private:
  void flush() const {
    std::string text;
    for (const auto& s : stages_) text += s + "\n";
    write_text(path_, text);
  }
  fs::path path_;
  std::vector<std::string> stages_;
};

PipelineConfig with_budget(PipelineConfig c, double b) {
  c.budget = b;
  return c;
}

}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::Full: return "full";
    case Variant::Original: return "original";
    case Variant::TreeOnly: return "tree-only";
    case Variant::NoScaling: return "no-scaling";
    case Variant::NoFilter: return "no-filter";
  }
  return "full";
}

Variant parse_variant(const std::string& name) {
  for (Variant v : {Variant::Full, Variant::Original, Variant::TreeOnly, Variant::NoScaling, Variant::NoFilter})
    if (variant_name(v) == name) return v;
  throw ParameterError("unknown variant '" + name + "'");
}

std::map<std::string, double> StageTimes::as_map() const {
  return {{"graph", graph},           {"sparsify", sparsify}, {"scale", scale},
          {"eigensolve", eigensolve}, {"filter", filter},     {"kmeans", kmeans}};
}

double percent2(double fraction) { return std::round(fraction * 10000.0) / 100.0; }

double seconds3(double s) { return std::round(s * 1000.0) / 1000.0; }

Prepared prepare(const PipelineConfig& config) {
  validate(config);
  Prepared p;
  const auto start = Clock::now();
  if (config.format == "graph") {
    p.graph = load_graph(config.dataset);
    if (!config.labels.empty()) p.truth = load_labels_csv(config.labels);
  } else {
    Dataset d = config.format == "libsvm"
                    ? load_libsvm(config.dataset)
                    : load_dense_csv(config.dataset, config.label_column == -2 ? std::nullopt
                                                                               : std::optional<int>(config.label_column));
    if (config.standardize) standardize_features(d);
    KnnOptions ko;
    ko.k = config.knn_k;
    ko.kernel = config.kernel == "gaussian"     ? Kernel::Gaussian
                : config.kernel == "reciprocal" ? Kernel::DistanceReciprocal
                                                : Kernel::SelfTuningGaussian;
    ko.sigma = config.sigma;
    ko.self_tuning_rank = config.self_tuning_rank;
    ko.symmetrization = config.symmetrization == "mutual" ? Symmetrization::Mutual : Symmetrization::Union;
    auto knn = build_knn_graph(d, ko);
    p.graph = std::move(knn.graph);
    p.repair_edges = knn.repair_edges;
    if (d.labels) p.truth = *d.labels;
    p.data = std::move(d);
  }
  if (!p.truth.empty() && static_cast<int>(p.truth.size()) != p.graph.num_vertices())
    throw DimensionError("label count does not match vertex count");
  p.graph_seconds = seconds_since(start);
  return p;
}

RunResult run_pipeline(const PipelineConfig& config, const Prepared& prepared, std::uint64_t seed, Variant variant,
                       const StageHook& hook) {
  const WeightedGraph& g = prepared.graph;
  RunResult r;
  r.variant = variant;
  r.seed = seed;
  r.times.graph = prepared.graph_seconds;
  auto notify = [&](const char* name) {
    if (hook) hook(name, r);
  };

  const bool sparsify = variant != Variant::Original;
  const bool scale = sparsify && config.scaling && variant != Variant::NoScaling;
  const bool filter = sparsify && config.filter && variant != Variant::NoFilter;

  if (sparsify) {
    stage("sparsify", [&] {
      const auto start = Clock::now();
      r.tree = build_spanning_tree(g, config.tree == "akpw" ? TreeMethod::AkpwLsst : TreeMethod::MaxWeight);
      RecoveryOptions ro;
      ro.budget = variant == Variant::TreeOnly ? 0.0 : config.budget;
      ro.batch_fraction = config.batch_fraction;
      ro.k_eigs = config.k_eigs ? config.k_eigs : config.clusters;
      ro.stability_tol = config.stability_tol;
      ro.t = config.t;
      ro.rank_once = config.rank_once;
      ro.seed = derive_seed(seed, kRecovery);
      r.sparsifier = recover_off_tree_edges(g, *r.tree, ro);
      r.clustered = r.sparsifier->subgraph;
      r.times.sparsify = seconds_since(start);
    });
    notify("sparsify");
  } else {
    r.clustered = g;
  }

  if (scale) {
    stage("scale", [&] {
      const auto start = Clock::now();
      ScaleParams sp;
      sp.delta_bar_lambda_n = config.delta_bar_lambda_n;
      sp.beta = config.beta;
      sp.eta_max = config.eta_max;
      sp.epsilon = config.epsilon;
      sp.n_max = config.n_max;
      sp.t = config.t;
      sp.clamp = config.clamp == "lambda-scaled" ? ClampRule::LambdaScaled : ClampRule::Literal;
      sp.seed = derive_seed(seed, kScaling);
      r.scaling = scale_subgraph(g, r.clustered, sp);
      r.clustered = r.scaling->scaled;
      r.times.scale = seconds_since(start);
    });
    notify("scale");
  }

  SpectralOptions so;
  so.normalized = config.normalized;
  so.row_normalize = config.row_normalize;
  so.filter_graph = filter ? &g : nullptr;
  so.gamma = config.gamma;
  so.n_filter = config.n_filter;
  so.eig_tol = config.eig_tol;
  so.eig_max_iter = config.eig_max_iter;
  so.seed = derive_seed(seed, kEigen);
  so.kmeans = {config.restarts, config.kmeans_max_iter, derive_seed(seed, kKmeans)};

  // spectral_cluster runs eigensolve, filter and k-means back to back; the
  // stages are split here so failures and the MANIFEST name the right one.
  stage("eigensolve", [&] {
    const auto start = Clock::now();
    EigOptions eo;
    eo.normalized = so.normalized;
    eo.tol = so.eig_tol;
    eo.max_iter = so.eig_max_iter;
    eo.seed = so.seed;
    eo.source = sparsify ? (scale ? "scaled" : "sparsified") : "original";
    r.spectral.embedding = bottom_eigenpairs(r.clustered, config.clusters, eo);
    r.times.eigensolve = r.spectral.timing.eigensolve_seconds = seconds_since(start);
  });
  notify("eigensolve");

  if (filter) {
    stage("filter", [&] {
      const auto start = Clock::now();
      r.spectral.embedding = filter_eigenvectors(g, r.spectral.embedding, so.gamma, so.n_filter);
      r.times.filter = r.spectral.timing.filter_seconds = seconds_since(start);
    });
    notify("filter");
  }

  stage("kmeans", [&] {
    const auto start = Clock::now();
    const Matrix x = so.row_normalize ? row_normalized(r.spectral.embedding.vectors) : r.spectral.embedding.vectors;
    r.spectral.kmeans = kmeans(x, config.clusters, so.kmeans);
    r.spectral.labels = r.spectral.kmeans.assignments;
    r.times.kmeans = r.spectral.timing.kmeans_seconds = seconds_since(start);
  });
  notify("kmeans");

  if (!prepared.truth.empty()) {
    stage("eval", [&] { r.accuracy = clustering_accuracy(r.spectral.labels, prepared.truth); });
    notify("eval");
  }
  return r;
}

namespace {

RunOutcome outcome_of(const RunResult& r) {
  RunOutcome o;
  o.acc = r.accuracy ? r.accuracy->acc : 0.0;
  o.timings = r.times.as_map();
  return o;
}

Aggregate aggregate_runs(const PipelineConfig& config, const Prepared& prepared, Variant variant,
                         const RunResult* first, std::ostream* log) {
  return averaged_run(
      [&](std::uint64_t seed) {
        if (first && seed == first->seed) return outcome_of(*first);
        auto r = run_pipeline(config, prepared, seed, variant);
        if (log)
          *log << "  " << variant_name(variant) << " b=" << config.budget << " seed=" << seed
               << " acc=" << (r.accuracy ? r.accuracy->acc : 0.0) << "\n";
        return outcome_of(r);
      },
      config.runs, config.seed);
}

}  // namespace

PipelineSummary write_pipeline(const PipelineConfig& config, std::ostream* log) {
  validate(config);
  const fs::path out = config.output;
  fs::create_directories(out);
  Manifest manifest(out / "MANIFEST");
  save_config(config, out / "config.txt");

  const Prepared prepared = stage("graph", [&] {
    auto p = prepare(config);
    save_graph(p.graph, out / "graph_original.txt");
    return p;
  });
  manifest.mark("graph");
  if (log)
    *log << "graph: n=" << prepared.graph.num_vertices() << " m=" << prepared.graph.num_edges() << " ("
         << seconds3(prepared.graph_seconds) << " s)\n";
  if (prepared.truth.empty()) throw StageError("eval", "dataset has no ground-truth labels");

  auto hook = [&](const std::string& name, const RunResult& r) {
    if (name == "sparsify") {
      save_graph(r.tree->as_graph(prepared.graph), out / "graph_tree.txt");
      save_graph(r.sparsifier->subgraph, out / "graph_sparsified.txt");
      write_text(out / "stability.json", stability_json(*r.sparsifier, config).dump(2) + "\n");
      std::string csv = "round,budget,ratio_var\n";
      char buf[128];
      for (const auto& h : r.sparsifier->history) {
        if (!h.ratio_var) continue;
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", h.round, h.budget, *h.ratio_var);
        csv += buf;
      }
      write_text(out / "plot_ratio_var_vs_budget.csv", csv);
    } else if (name == "scale") {
      save_graph(r.scaling->scaled, out / "graph_scaled.txt");
      write_text(out / "scaling.json", scaling_json(*r.scaling, config, derive_seed(r.seed, kScaling)).dump(2) + "\n");
    } else if (name == "eigensolve" || name == "filter") {
      save_matrix_csv(r.spectral.embedding.vectors, out / "embedding.csv");
      write_text(out / "embedding.json", embedding_json(r.spectral.embedding).dump(2) + "\n");
    } else if (name == "kmeans") {
      save_labels_csv(r.spectral.labels, out / "labels.csv");
    }
    manifest.mark(name);
  };

  const RunResult first = run_pipeline(config, prepared, config.seed, Variant::Full, hook);
  if (log) *log << "run seed=" << first.seed << " acc=" << first.accuracy->acc << "\n";

  PipelineSummary summary;
  summary.aggregate = stage("eval", [&] { return aggregate_runs(config, prepared, Variant::Full, &first, log); });

  std::vector<double> budgets = config.budget_sweep.empty() ? std::vector<double>{config.budget} : config.budget_sweep;
  for (double b : budgets) {
    if (b == config.budget) {
      summary.budget_curve.emplace_back(b, summary.aggregate);
    } else {
      const auto cb = with_budget(config, b);
      summary.budget_curve.emplace_back(b, stage("eval", [&] { return aggregate_runs(cb, prepared, Variant::Full, nullptr, log); }));
    }
  }
  std::string csv = "budget,acc_mean,acc_std\n";
  char buf[128];
  for (const auto& [b, a] : summary.budget_curve) {
    std::snprintf(buf, sizeof buf, "%.17g,%.2f,%.2f\n", b, percent2(a.acc_mean), percent2(a.acc_std));
    csv += buf;
  }
  write_text(out / "plot_acc_vs_budget.csv", csv);

  json metrics;
  metrics["dataset"] = prepared.data ? prepared.data->name : fs::path(config.dataset).stem().string();
  metrics["method"] = variant_name(Variant::Full);
  metrics["params"] = config_json(config);
  metrics["n"] = prepared.graph.num_vertices();
  metrics["edges"] = {{"graph", prepared.graph.num_edges()},
                      {"sparsifier", first.sparsifier->subgraph.num_edges()},
                      {"repair", prepared.repair_edges}};
  metrics["budget"] = first.sparsifier->budget;
  const auto agg = aggregate_json(summary.aggregate);
  for (const auto& [k, v] : agg.items()) metrics[k] = v;
  if (config.condition_report) {
    ConditionOptions co;
    co.seed = derive_seed(config.seed, 99);
    metrics["condition"]["sparsified"] = condition_json(condition_metrics(prepared.graph, first.sparsifier->subgraph, co));
    if (first.scaling)
      metrics["condition"]["scaled"] = condition_json(condition_metrics(prepared.graph, first.scaling->scaled, co));
  }
  write_text(out / "metrics.json", metrics.dump(2) + "\n");
  manifest.mark("complete");
  return summary;
}

std::string write_compare(const PipelineConfig& config, Variant against, std::ostream* log) {
  validate(config);
  const fs::path out = config.output;
  fs::create_directories(out);
  const Prepared prepared = stage("graph", [&] { return prepare(config); });
  if (prepared.truth.empty()) throw StageError("eval", "dataset has no ground-truth labels");
  const auto full = aggregate_runs(config, prepared, Variant::Full, nullptr, log);
  const auto other = aggregate_runs(config, prepared, against, nullptr, log);

  json j;
  j["dataset"] = prepared.data ? prepared.data->name : fs::path(config.dataset).stem().string();
  j["against"] = variant_name(against);
  j["params"] = config_json(config);
  j["seeds"] = {config.seed, config.seed + static_cast<std::uint64_t>(config.runs) - 1};
  j["graph_seconds"] = seconds3(prepared.graph_seconds);
  j["full"] = aggregate_json(full);
  j[variant_name(against)] = aggregate_json(other);
  const auto text = j.dump(2) + "\n";
  write_text(out / "compare.json", text);
  return text;
}

std::string stability_report(const Sparsifier& s, const PipelineConfig& config) {
  return stability_json(s, config).dump(2) + "\n";
}

std::string scaling_report(const ScaleResult& r, const PipelineConfig& config, std::uint64_t seed) {
  return scaling_json(r, config, seed).dump(2) + "\n";
}

std::string embedding_report(const SpectralEmbedding& e) { return embedding_json(e).dump(2) + "\n"; }

std::string accuracy_report(const AccuracyReport& r) {
  json j;
  j["acc"] = percent2(r.acc);
  j["matched"] = r.matched;
  j["n"] = r.n;
  json mapping = json::object();
  for (std::size_t a = 0; a < r.cluster_ids.size(); ++a) {
    const int b = r.mapping[a];
    mapping[std::to_string(r.cluster_ids[a])] = b < 0 ? json(nullptr) : json(r.truth_ids[static_cast<std::size_t>(b)]);
  }
  j["mapping"] = mapping;
  j["confusion"] = r.confusion;
  return j.dump(2) + "\n";
}

std::string metrics_json(const WeightedGraph& g, const WeightedGraph& s, const ConditionOptions& options) {
  if (g.num_vertices() != s.num_vertices()) throw DimensionError("graphs have different vertex counts");
  const auto m = condition_metrics(g, s, options);
  json j = condition_json(m);
  if (s.num_edges() == s.num_vertices() - 1) {
    // trace(L_S^+ L_G) for a tree S: every edge of G weighted by its path resistance in S.
    std::vector<EdgeId> ids(static_cast<std::size_t>(s.num_edges()));
    for (EdgeId e = 0; e < s.num_edges(); ++e) ids[static_cast<std::size_t>(e)] = e;
    const auto t = SpanningTree::from_edges(s, ids);
    double stretch = 0.0;
    for (const auto& e : g.edges()) stretch += e.w * t.path_resistance(e.u, e.v);
    j["total_stretch"] = stretch;
  } else {
    j["total_stretch"] = nullptr;
  }
  j["edge_counts"] = {{"graph", g.num_edges()}, {"subgraph", s.num_edges()}};
  j["budget_b"] = off_tree_budget(s);
  return j.dump(2) + "\n";
}

}  // namespace specsparse
