#pragma once

#include "specsparse/cluster.hpp"
#include "specsparse/dataio.hpp"
#include "specsparse/eval.hpp"
#include "specsparse/knn.hpp"
#include "specsparse/pencil.hpp"
#include "specsparse/scale.hpp"
#include "specsparse/sparsify.hpp"
#include "specsparse/tree.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace specsparse {

/// Everything a pipeline run depends on. On disk it is a flat "key = value"
/// file; see config_keys() for the schema.
struct PipelineConfig {
  std::string dataset;
  std::string format = "csv";  // csv | libsvm | graph
  int label_column = -1;       // csv only; -1 = last column, -2 = no labels
  std::string labels;          // separate truth file (graph format)
  bool standardize = false;

  int knn_k = 10;
  std::string kernel = "self-tuning";  // self-tuning | gaussian | reciprocal
  double sigma = 1.0;
  int self_tuning_rank = 7;
  std::string symmetrization = "union";  // union | mutual

  std::string tree = "max-weight";  // max-weight | akpw
  double budget = 0.15;
  double batch_fraction = 0.01;
  double stability_tol = 0.01;
  int t = 2;
  int k_eigs = 0;  // 0 = clusters
  bool rank_once = false;

  bool scaling = true;
  double delta_bar_lambda_n = 0.5;
  double beta = 0.5;
  double eta_max = 0.2;
  double epsilon = 0.01;
  int n_max = 100;
  std::string clamp = "lambda-scaled";  // lambda-scaled | literal

  bool filter = true;
  double gamma = 0.7;
  int n_filter = 10;

  int clusters = 10;
  int restarts = 10;
  int kmeans_max_iter = 300;
  bool normalized = true;
  bool row_normalize = true;
  double eig_tol = 1e-8;
  int eig_max_iter = 1000;

  std::uint64_t seed = 1;
  int runs = 1;
  std::vector<double> budget_sweep;  // extra budgets for the ACC-vs-budget table
  bool condition_report = true;
  int workers = 1;
  std::string output = "out";
};

/// Keys accepted by the config file, in the order save_config writes them.
std::vector<std::string> config_keys();

/// Throws ParameterError naming the first out-of-range field.
void validate(const PipelineConfig& config);

/// Parses "key = value" lines; '#' starts a comment. Unknown keys and
/// malformed values raise ParseError with the line number.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string format_config(const PipelineConfig& config);
void save_config(const PipelineConfig& config, const std::filesystem::path& path);

/// Sets one field from its textual form; returns false for an unknown key.
bool set_config_value(PipelineConfig& config, const std::string& key, const std::string& value);

enum class Variant { Full, Original, TreeOnly, NoScaling, NoFilter };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);

/// Dataset plus its similarity graph; shared by every run of a config.
struct Prepared {
  std::optional<Dataset> data;
  WeightedGraph graph;
  std::vector<int> truth;  // empty when the input has no labels
  int repair_edges = 0;
  double graph_seconds = 0.0;
};

Prepared prepare(const PipelineConfig& config);

struct StageTimes {
  double graph = 0.0;
  double sparsify = 0.0;
  double scale = 0.0;
  double eigensolve = 0.0;
  double filter = 0.0;
  double kmeans = 0.0;

  std::map<std::string, double> as_map() const;
};

struct RunResult {
  Variant variant = Variant::Full;
  std::uint64_t seed = 0;
  std::optional<SpanningTree> tree;
  std::optional<Sparsifier> sparsifier;
  std::optional<ScaleResult> scaling;
  WeightedGraph clustered;  // graph handed to the eigensolver
  SpectralResult spectral;
  std::optional<AccuracyReport> accuracy;
  StageTimes times;
};

/// Called after each completed stage with its name ("sparsify", "scale",
/// "eigensolve", "filter", "kmeans", "eval") and the partial result.
using StageHook = std::function<void(const std::string&, const RunResult&)>;

/// One seeded run of the pipeline variant on prepared data.
RunResult run_pipeline(const PipelineConfig& config, const Prepared& prepared, std::uint64_t seed,
                       Variant variant = Variant::Full, const StageHook& hook = {});

/// Percent with two decimals, as in the reported tables.
double percent2(double fraction);

/// Seconds rounded to milliseconds.
double seconds3(double s);

struct PipelineSummary {
  Aggregate aggregate;
  std::vector<std::pair<double, Aggregate>> budget_curve;  // (budget, ACC aggregate)
};

/// Full `pipeline` command: runs, writes every artifact and the MANIFEST
/// under config.output. Stage failures propagate as StageError.
PipelineSummary write_pipeline(const PipelineConfig& config, std::ostream* log = nullptr);

/// `compare` command: the variant and the full pipeline over the same seeds;
/// writes compare.json under config.output and returns its text.
std::string write_compare(const PipelineConfig& config, Variant against, std::ostream* log = nullptr);

/// Stage failure wrapper carrying the stage name.
struct StageError : std::runtime_error {
  StageError(std::string stage, const std::string& cause)
      : std::runtime_error(stage + ": " + cause), stage(std::move(stage)) {}
  std::string stage;
};

/// JSON sidecars shared by the pipeline and the single-stage commands.
std::string stability_report(const Sparsifier& s, const PipelineConfig& config);
std::string scaling_report(const ScaleResult& r, const PipelineConfig& config, std::uint64_t seed);
std::string embedding_report(const SpectralEmbedding& e);
std::string accuracy_report(const AccuracyReport& r);

/// `metrics` command payload for a graph and a sparsifier of it.
std::string metrics_json(const WeightedGraph& g, const WeightedGraph& s, const ConditionOptions& options = {});

}  // namespace specsparse
