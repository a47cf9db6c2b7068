#include "doctest.h"

#include "fixtures.hpp"
#include "temp_dir.hpp"

#include "specsparse/errors.hpp"
#include "specsparse/pipeline.hpp"

#include <json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

using namespace specsparse;
using testing_util::read_file;
using testing_util::TempDir;

namespace {

// Two 8-cliques over a 1e-6 bridge, written as a graph file plus labels.
PipelineConfig two_clique_config(const TempDir& dir) {
  save_graph(fixtures::two_cliques(8), dir / "g.txt");
  save_labels_csv(fixtures::two_cliques_truth(8), dir / "truth.csv");
  PipelineConfig c;
  c.dataset = (dir / "g.txt").string();
  c.format = "graph";
  c.labels = (dir / "truth.csv").string();
  c.clusters = 2;
  c.restarts = 3;
  c.output = (dir / "out").string();
  return c;
}

int run_cli(const std::string& args, const TempDir& dir) {
  const std::string cmd = std::string(SPECSPARSE_BIN) + " " + args + " > " + (dir / "stdout.txt").string() + " 2> " +
                          (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config text round trip") {
  PipelineConfig c;
  c.dataset = "data/x.csv";
  c.budget = 0.05;
  c.budget_sweep = {0.02, 0.1};
  c.scaling = false;
  c.seed = 42;
  c.clamp = "literal";
  const auto back = parse_config(format_config(c));
  CHECK(format_config(back) == format_config(c));
  CHECK(back.budget_sweep == c.budget_sweep);
  CHECK_FALSE(back.scaling);
  CHECK(back.seed == 42);
}

TEST_CASE("config errors name the line or field") {
  try {
    parse_config("budget = 0.1\nbogus = 3\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("budget = lots\n"), ParseError);
  PipelineConfig c;
  c.dataset = "x";
  c.gamma = 1.5;
  try {
    validate(c);
    FAIL("expected a parameter error");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("gamma") != std::string::npos);
  }
  c.gamma = 0.7;
  c.budget = -0.1;
  CHECK_THROWS_AS(validate(c), ParameterError);
}

TEST_CASE("pipeline on two cliques writes every artifact") {
  TempDir dir;
  const auto c = two_clique_config(dir);
  const auto summary = write_pipeline(c);
  CHECK(summary.aggregate.acc_mean == 1.0);
  const std::filesystem::path out = c.output;
  for (const char* f : {"config.txt", "graph_original.txt", "graph_tree.txt", "graph_sparsified.txt", "graph_scaled.txt",
                        "stability.json", "scaling.json", "embedding.csv", "embedding.json", "labels.csv",
                        "metrics.json", "plot_acc_vs_budget.csv", "plot_ratio_var_vs_budget.csv"})
    CHECK_MESSAGE(std::filesystem::exists(out / f), f);
  const auto manifest = read_file(out / "MANIFEST");
  CHECK(manifest.find("graph\n") == 0);
  CHECK(manifest.find("complete\n") != std::string::npos);
  const auto metrics = nlohmann::json::parse(read_file(out / "metrics.json"));
  CHECK(metrics["acc_mean"].get<double>() == 100.0);
  CHECK(load_config(out / "config.txt").budget == c.budget);
}

TEST_CASE("zero budget clusters the tree") {
  TempDir dir;
  auto c = two_clique_config(dir);
  c.budget = 0.0;
  const Prepared p = prepare(c);
  const auto r = run_pipeline(c, p, 1);
  CHECK(r.sparsifier->budget == 0.0);
  CHECK(r.sparsifier->subgraph.num_edges() == 15);
  CHECK(r.accuracy->acc == 1.0);
}

TEST_CASE("variants share the prepared graph") {
  TempDir dir;
  const auto c = two_clique_config(dir);
  const Prepared p = prepare(c);
  const auto original = run_pipeline(c, p, 1, Variant::Original);
  CHECK_FALSE(original.sparsifier);
  CHECK(original.clustered == p.graph);
  const auto plain = run_pipeline(c, p, 1, Variant::NoScaling);
  CHECK_FALSE(plain.scaling);
  CHECK(plain.clustered == plain.sparsifier->subgraph);
  CHECK(parse_variant(variant_name(Variant::TreeOnly)) == Variant::TreeOnly);
  CHECK_THROWS(parse_variant("nonsense"));

  const auto text = write_compare(c, Variant::NoScaling);
  const auto j = nlohmann::json::parse(text);
  CHECK(j["against"] == variant_name(Variant::NoScaling));
  CHECK(j["full"]["acc_mean"].get<double>() == 100.0);
}

TEST_CASE("metrics payload") {
  const auto g = fixtures::random_connected(20, 30, 5);
  const auto same = nlohmann::json::parse(metrics_json(g, g));
  CHECK(same["kappa"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(same["total_stretch"].is_null());

  const auto c4 = fixtures::cycle(4);
  const auto path = c4.subgraph(fixtures::path_edge_ids(c4));
  const auto tree = nlohmann::json::parse(metrics_json(c4, path));
  CHECK(tree["total_stretch"].get<double>() == doctest::Approx(6.0));
  CHECK(tree["budget_b"].get<double>() == 0.0);
  CHECK(tree["kappa"].get<double>() == doctest::Approx(4.0));
  const auto whole = nlohmann::json::parse(metrics_json(c4, c4));
  CHECK(whole["budget_b"].get<double>() == doctest::Approx(0.25));
}

TEST_CASE("command line front end") {
  TempDir dir;
  const auto c = two_clique_config(dir);
  save_config(c, dir / "run.cfg");
  CHECK(run_cli("pipeline -q -c " + (dir / "run.cfg").string(), dir) == 0);
  CHECK(read_file(dir / "stdout.txt").find("acc_mean=100") != std::string::npos);

  CHECK(run_cli("metrics " + (dir / "g.txt").string() + " " + (dir / "g.txt").string(), dir) == 0);
  CHECK(nlohmann::json::parse(read_file(dir / "stdout.txt"))["kappa"].get<double>() == doctest::Approx(1.0));

  // Unlabelled input fails in the eval stage with a distinct exit code.
  dir.write("points.csv", "0,0\n0,1\n1,0\n5,5\n5,6\n6,5\n");
  auto bad = c;
  bad.dataset = (dir / "points.csv").string();
  bad.format = "csv";
  bad.label_column = -2;
  bad.labels.clear();
  bad.knn_k = 2;
  bad.self_tuning_rank = 2;
  save_config(bad, dir / "bad.cfg");
  CHECK(run_cli("pipeline -q -c " + (dir / "bad.cfg").string(), dir) == 2);
  CHECK(read_file(dir / "stderr.txt").find("eval") != std::string::npos);

  CHECK(run_cli("pipeline -q -c " + (dir / "missing.cfg").string(), dir) != 0);
  CHECK(run_cli("sparsify " + (dir / "g.txt").string() + " -o " + (dir / "s.txt").string() + " -b 0.1", dir) == 0);
  CHECK(load_graph(dir / "s.txt").num_edges() > 15);
}

}  // TEST_SUITE cli
