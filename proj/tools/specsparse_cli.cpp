#include "specsparse/cluster.hpp"
#include "specsparse/dataio.hpp"
#include "specsparse/errors.hpp"
#include "specsparse/eval.hpp"
#include "specsparse/knn.hpp"
#include "specsparse/pencil.hpp"
#include "specsparse/pipeline.hpp"
#include "specsparse/random.hpp"
#include "specsparse/scale.hpp"
#include "specsparse/sparsify.hpp"
#include "specsparse/tree.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>

using namespace specsparse;

namespace {

// Every config key doubles as a --flag (underscores become dashes).
struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", file, "flat key = value config file");
    for (const auto& key : config_keys()) {
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      cmd->add_option(flag, values[key], "config key " + key)->default_str("");
    }
  }

  PipelineConfig resolve(CLI::App* cmd) const {
    PipelineConfig c = file.empty() ? PipelineConfig{} : load_config(file);
    for (const auto& key : config_keys()) {
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (cmd->count(flag)) set_config_value(c, key, values.at(key));
    }
    validate(c);
    return c;
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrum-preserving graph sparsification and spectral clustering"};
  app.require_subcommand(1);

  // pipeline
  ConfigFlags pipeline_flags;
  auto* pipeline = app.add_subcommand("pipeline", "run the full sparsify / scale / cluster pipeline");
  pipeline_flags.attach(pipeline);
  bool quiet = false;
  pipeline->add_flag("-q,--quiet", quiet, "no progress output");

  // compare
  ConfigFlags compare_flags;
  std::string against = "original";
  auto* compare = app.add_subcommand("compare", "full pipeline against an ablation over shared seeds");
  compare_flags.attach(compare);
  compare->add_option("--against", against, "original | tree-only | no-scaling | no-filter")
      ->check(CLI::IsMember({"original", "tree-only", "no-scaling", "no-filter"}));

  // metrics
  std::string graph_a, graph_b, metrics_out;
  int dense_cap = 1500;
  bool exact_only = false;
  std::uint64_t metrics_seed = 0;
  auto* metrics = app.add_subcommand("metrics", "condition number, stretch and budget of a sparsifier");
  metrics->add_option("graph", graph_a, "original graph file")->required();
  metrics->add_option("subgraph", graph_b, "sparsifier graph file")->required();
  metrics->add_option("--dense-cap", dense_cap, "largest n solved with the dense oracle");
  metrics->add_flag("--exact", exact_only, "fail instead of estimating above the cap");
  metrics->add_option("--seed", metrics_seed);
  metrics->add_option("-o,--output", metrics_out, "write JSON here instead of stdout");

  // knn-graph
  std::string knn_in, knn_out, knn_labels_out, knn_format = "csv", knn_kernel = "self-tuning", knn_sym = "union";
  int knn_label_column = -1;
  KnnOptions knn_opt;
  bool knn_standardize = false;
  auto* knn = app.add_subcommand("knn-graph", "build a kNN similarity graph from a point set");
  knn->add_option("input", knn_in, "csv or libsvm file")->required();
  knn->add_option("-o,--output", knn_out, "graph file")->required();
  knn->add_option("--format", knn_format)->check(CLI::IsMember({"csv", "libsvm"}));
  knn->add_option("--label-column", knn_label_column, "csv label column, -1 last, -2 none");
  knn->add_option("--labels-out", knn_labels_out, "write ground-truth labels here");
  knn->add_option("-k,--knn-k", knn_opt.k);
  knn->add_option("--kernel", knn_kernel)->check(CLI::IsMember({"self-tuning", "gaussian", "reciprocal"}));
  knn->add_option("--sigma", knn_opt.sigma);
  knn->add_option("--self-tuning-rank", knn_opt.self_tuning_rank);
  knn->add_option("--symmetrization", knn_sym)->check(CLI::IsMember({"union", "mutual"}));
  knn->add_flag("--standardize", knn_standardize);

  // sparsify
  std::string sp_graph, sp_out, sp_tree_out, sp_json, sp_tree = "max-weight";
  RecoveryOptions sp_opt;
  auto* sparsify = app.add_subcommand("sparsify", "spanning tree plus criticality-ranked off-tree edges");
  sparsify->add_option("graph", sp_graph)->required();
  sparsify->add_option("-o,--output", sp_out, "sparsifier graph file")->required();
  sparsify->add_option("--tree-output", sp_tree_out, "spanning tree graph file");
  sparsify->add_option("--json", sp_json, "stability history sidecar");
  sparsify->add_option("--tree", sp_tree)->check(CLI::IsMember({"max-weight", "akpw"}));
  sparsify->add_option("-b,--budget", sp_opt.budget);
  sparsify->add_option("--batch-fraction", sp_opt.batch_fraction);
  sparsify->add_option("--k-eigs", sp_opt.k_eigs);
  sparsify->add_option("--stability-tol", sp_opt.stability_tol);
  sparsify->add_option("-t", sp_opt.t);
  sparsify->add_flag("--rank-once", sp_opt.rank_once);
  sparsify->add_option("--seed", sp_opt.seed);

  // scale
  std::string sc_graph, sc_sub, sc_out, sc_json, sc_clamp = "lambda-scaled";
  ScaleParams sc_opt;
  auto* scale = app.add_subcommand("scale", "constrained SGD edge-weight scaling of a sparsifier");
  scale->add_option("graph", sc_graph)->required();
  scale->add_option("subgraph", sc_sub)->required();
  scale->add_option("-o,--output", sc_out)->required();
  scale->add_option("--json", sc_json, "iteration history sidecar");
  scale->add_option("--delta-bar-lambda-n", sc_opt.delta_bar_lambda_n);
  scale->add_option("--beta", sc_opt.beta);
  scale->add_option("--eta-max", sc_opt.eta_max);
  scale->add_option("--epsilon", sc_opt.epsilon);
  scale->add_option("--n-max", sc_opt.n_max);
  scale->add_option("-t", sc_opt.t);
  scale->add_option("--clamp", sc_clamp)->check(CLI::IsMember({"literal", "lambda-scaled"}));
  scale->add_option("--seed", sc_opt.seed);

  // cluster
  std::string cl_graph, cl_original, cl_labels, cl_embedding;
  int cl_k = 10;
  SpectralOptions cl_opt;
  bool cl_unnormalized = false, cl_no_row_norm = false;
  std::uint64_t cl_seed = 0;
  auto* cluster = app.add_subcommand("cluster", "spectral clustering of a graph");
  cluster->add_option("graph", cl_graph)->required();
  cluster->add_option("-k,--clusters", cl_k);
  cluster->add_option("--filter-with", cl_original, "original graph for eigenvector filtering");
  cluster->add_option("--gamma", cl_opt.gamma);
  cluster->add_option("--n-filter", cl_opt.n_filter);
  cluster->add_option("--restarts", cl_opt.kmeans.restarts);
  cluster->add_option("--kmeans-max-iter", cl_opt.kmeans.max_iter);
  cluster->add_option("--eig-tol", cl_opt.eig_tol);
  cluster->add_flag("--unnormalized", cl_unnormalized);
  cluster->add_flag("--no-row-normalize", cl_no_row_norm);
  cluster->add_option("--seed", cl_seed);
  cluster->add_option("-o,--labels", cl_labels, "labels CSV")->required();
  cluster->add_option("--embedding", cl_embedding, "embedding CSV (a JSON sidecar is written next to it)");

  // eval
  std::string ev_pred, ev_truth;
  auto* eval = app.add_subcommand("eval", "clustering accuracy against ground truth");
  eval->add_option("predicted", ev_pred)->required();
  eval->add_option("truth", ev_truth)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (pipeline->parsed()) {
      const auto config = pipeline_flags.resolve(pipeline);
      const auto summary = write_pipeline(config, quiet ? nullptr : &std::cerr);
      std::cout << "acc_mean=" << percent2(summary.aggregate.acc_mean) << " acc_std=" << percent2(summary.aggregate.acc_std)
                << " runs=" << summary.aggregate.runs << " output=" << config.output << "\n";
    } else if (compare->parsed()) {
      const auto config = compare_flags.resolve(compare);
      std::cout << write_compare(config, parse_variant(against));
    } else if (metrics->parsed()) {
      ConditionOptions co;
      co.dense_cap = dense_cap;
      co.allow_approximate = !exact_only;
      co.seed = metrics_seed;
      const auto text = metrics_json(load_graph(graph_a), load_graph(graph_b), co);
      if (metrics_out.empty())
        std::cout << text;
      else
        write_file(metrics_out, text);
    } else if (knn->parsed()) {
      Dataset d = knn_format == "libsvm" ? load_libsvm(knn_in)
                                         : load_dense_csv(knn_in, knn_label_column == -2
                                                                      ? std::nullopt
                                                                      : std::optional<int>(knn_label_column));
      if (knn_standardize) standardize_features(d);
      knn_opt.kernel = knn_kernel == "gaussian"     ? Kernel::Gaussian
                       : knn_kernel == "reciprocal" ? Kernel::DistanceReciprocal
                                                    : Kernel::SelfTuningGaussian;
      knn_opt.symmetrization = knn_sym == "mutual" ? Symmetrization::Mutual : Symmetrization::Union;
      const auto g = build_knn_graph(d, knn_opt);
      save_graph(g.graph, knn_out);
      if (!knn_labels_out.empty() && d.labels) save_labels_csv(*d.labels, knn_labels_out);
      std::cout << "n=" << g.graph.num_vertices() << " m=" << g.graph.num_edges() << " repair_edges=" << g.repair_edges
                << "\n";
    } else if (sparsify->parsed()) {
      const auto g = load_graph(sp_graph);
      const auto tree = build_spanning_tree(g, sp_tree == "akpw" ? TreeMethod::AkpwLsst : TreeMethod::MaxWeight);
      const auto s = recover_off_tree_edges(g, tree, sp_opt);
      save_graph(s.subgraph, sp_out);
      if (!sp_tree_out.empty()) save_graph(tree.as_graph(g), sp_tree_out);
      if (!sp_json.empty()) {
        PipelineConfig c;
        c.budget = sp_opt.budget;
        c.batch_fraction = sp_opt.batch_fraction;
        c.stability_tol = sp_opt.stability_tol;
        c.t = sp_opt.t;
        c.k_eigs = sp_opt.k_eigs;
        c.rank_once = sp_opt.rank_once;
        write_file(sp_json, stability_report(s, c));
      }
      std::cout << "budget=" << s.budget << " edges=" << s.subgraph.num_edges() << " rounds=" << s.history.size() - 1
                << (s.stable ? " stable" : "") << (s.clamped ? " clamped" : "") << "\n";
    } else if (scale->parsed()) {
      sc_opt.clamp = sc_clamp == "lambda-scaled" ? ClampRule::LambdaScaled : ClampRule::Literal;
      const auto g = load_graph(sc_graph);
      const auto r = scale_subgraph(g, load_graph(sc_sub), sc_opt);
      save_graph(r.scaled, sc_out);
      if (!sc_json.empty()) {
        PipelineConfig c;
        c.delta_bar_lambda_n = sc_opt.delta_bar_lambda_n;
        c.beta = sc_opt.beta;
        c.eta_max = sc_opt.eta_max;
        c.epsilon = sc_opt.epsilon;
        c.n_max = sc_opt.n_max;
        c.t = sc_opt.t;
        c.clamp = sc_clamp;
        write_file(sc_json, scaling_report(r, c, sc_opt.seed));
      }
      std::cout << "iterations=" << r.state.k << " lambda1=" << r.state.lambda_1_k << " lambdan=" << r.state.lambda_n_k
                << "\n";
    } else if (cluster->parsed()) {
      const auto g = load_graph(cl_graph);
      std::optional<WeightedGraph> original;
      if (!cl_original.empty()) original = load_graph(cl_original);
      cl_opt.filter_graph = original ? &*original : nullptr;
      cl_opt.normalized = !cl_unnormalized;
      cl_opt.row_normalize = !cl_no_row_norm;
      cl_opt.seed = derive_seed(cl_seed, 3);
      cl_opt.kmeans.seed = derive_seed(cl_seed, 4);
      const auto r = spectral_cluster(g, cl_k, cl_opt);
      save_labels_csv(r.labels, cl_labels);
      if (!cl_embedding.empty()) {
        save_matrix_csv(r.embedding.vectors, cl_embedding);
        write_file(cl_embedding + ".json", embedding_report(r.embedding));
      }
      std::cout << "eigensolve_seconds=" << seconds3(r.timing.eigensolve_seconds)
                << " filter_seconds=" << seconds3(r.timing.filter_seconds)
                << " kmeans_seconds=" << seconds3(r.timing.kmeans_seconds) << "\n";
    } else if (eval->parsed()) {
      std::cout << accuracy_report(clustering_accuracy(load_labels_csv(ev_pred), load_labels_csv(ev_truth)));
    }
  } catch (const StageError& e) {
    std::cerr << "error in stage " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
