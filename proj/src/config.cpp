#include "specsparse/errors.hpp"
#include "specsparse/pipeline.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>

namespace specsparse {
namespace {

using Member = std::variant<std::string PipelineConfig::*, int PipelineConfig::*, double PipelineConfig::*,
                            bool PipelineConfig::*, std::uint64_t PipelineConfig::*,
                            std::vector<double> PipelineConfig::*>;

struct Field {
  const char* key;
  Member member;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"dataset", &PipelineConfig::dataset},
      {"format", &PipelineConfig::format},
      {"label_column", &PipelineConfig::label_column},
      {"labels", &PipelineConfig::labels},
      {"standardize", &PipelineConfig::standardize},
      {"knn_k", &PipelineConfig::knn_k},
      {"kernel", &PipelineConfig::kernel},
      {"sigma", &PipelineConfig::sigma},
      {"self_tuning_rank", &PipelineConfig::self_tuning_rank},
      {"symmetrization", &PipelineConfig::symmetrization},
      {"tree", &PipelineConfig::tree},
      {"budget", &PipelineConfig::budget},
      {"batch_fraction", &PipelineConfig::batch_fraction},
      {"stability_tol", &PipelineConfig::stability_tol},
      {"t", &PipelineConfig::t},
      {"k_eigs", &PipelineConfig::k_eigs},
      {"rank_once", &PipelineConfig::rank_once},
      {"scaling", &PipelineConfig::scaling},
      {"delta_bar_lambda_n", &PipelineConfig::delta_bar_lambda_n},
      {"beta", &PipelineConfig::beta},
      {"eta_max", &PipelineConfig::eta_max},
      {"epsilon", &PipelineConfig::epsilon},
      {"n_max", &PipelineConfig::n_max},
      {"clamp", &PipelineConfig::clamp},
      {"filter", &PipelineConfig::filter},
      {"gamma", &PipelineConfig::gamma},
      {"n_filter", &PipelineConfig::n_filter},
      {"clusters", &PipelineConfig::clusters},
      {"restarts", &PipelineConfig::restarts},
      {"kmeans_max_iter", &PipelineConfig::kmeans_max_iter},
      {"normalized", &PipelineConfig::normalized},
      {"row_normalize", &PipelineConfig::row_normalize},
      {"eig_tol", &PipelineConfig::eig_tol},
      {"eig_max_iter", &PipelineConfig::eig_max_iter},
      {"seed", &PipelineConfig::seed},
      {"runs", &PipelineConfig::runs},
      {"budget_sweep", &PipelineConfig::budget_sweep},
      {"condition_report", &PipelineConfig::condition_report},
      {"workers", &PipelineConfig::workers},
      {"output", &PipelineConfig::output},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return out = true, true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return out = false, true;
  return false;
}

bool parse_list(const std::string& s, std::vector<double>& out) {
  out.clear();
  if (trim(s).empty()) return true;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    if (!parse_number(trim(item), v)) return false;
    out.push_back(v);
  }
  return true;
}

std::string get(const PipelineConfig& c, const Member& m) {
  return std::visit(
      [&](auto ptr) -> std::string {
        const auto& v = c.*ptr;
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          std::string out;
          for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
          return out;
        } else {
          return std::to_string(v);
        }
      },
      m);
}

bool set(PipelineConfig& c, const Member& m, const std::string& text) {
  return std::visit(
      [&](auto ptr) -> bool {
        auto& v = c.*ptr;
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          v = text;
          return true;
        } else if constexpr (std::is_same_v<T, bool>) {
          return parse_bool(text, v);
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          return parse_list(text, v);
        } else {
          return parse_number(text, v);
        }
      },
      m);
}

const Field* find_field(const std::string& key) {
  for (const auto& f : fields())
    if (key == f.key) return &f;
  return nullptr;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError("config: " + what);
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.emplace_back(f.key);
  return keys;
}

bool set_config_value(PipelineConfig& config, const std::string& key, const std::string& value) {
  const Field* f = find_field(key);
  if (!f) return false;
  if (!set(config, f->member, value)) throw ParameterError("config: bad value '" + value + "' for " + key);
  return true;
}

void validate(const PipelineConfig& c) {
  require(c.format == "csv" || c.format == "libsvm" || c.format == "graph", "format must be csv, libsvm or graph");
  require(c.label_column >= -2, "label_column must be >= -2");
  require(c.knn_k >= 1, "knn_k must be >= 1");
  require(c.kernel == "self-tuning" || c.kernel == "gaussian" || c.kernel == "reciprocal",
          "kernel must be self-tuning, gaussian or reciprocal");
  require(c.sigma > 0.0, "sigma must be positive");
  require(c.self_tuning_rank >= 1, "self_tuning_rank must be >= 1");
  require(c.symmetrization == "union" || c.symmetrization == "mutual", "symmetrization must be union or mutual");
  require(c.tree == "max-weight" || c.tree == "akpw", "tree must be max-weight or akpw");
  require(c.budget >= 0.0, "budget must be >= 0");
  require(c.batch_fraction > 0.0, "batch_fraction must be positive");
  require(c.stability_tol >= 0.0, "stability_tol must be >= 0");
  require(c.t >= 1, "t must be >= 1");
  require(c.k_eigs == 0 || c.k_eigs >= 2, "k_eigs must be 0 or >= 2");
  require(c.delta_bar_lambda_n > 0.0 && c.delta_bar_lambda_n <= 1.0, "delta_bar_lambda_n must lie in (0, 1]");
  require(c.beta >= 0.0 && c.beta < 1.0, "beta must lie in [0, 1)");
  require(c.eta_max > 0.0, "eta_max must be positive");
  require(c.epsilon > 0.0, "epsilon must be positive");
  require(c.n_max >= 1, "n_max must be >= 1");
  require(c.clamp == "literal" || c.clamp == "lambda-scaled", "clamp must be literal or lambda-scaled");
  require(c.gamma > 0.0 && c.gamma <= 1.0, "gamma must lie in (0, 1]");
  require(c.n_filter >= 0, "n_filter must be >= 0");
  require(c.clusters >= 2, "clusters must be >= 2");
  require(c.restarts >= 1, "restarts must be >= 1");
  require(c.kmeans_max_iter >= 1, "kmeans_max_iter must be >= 1");
  require(c.eig_tol > 0.0, "eig_tol must be positive");
  require(c.eig_max_iter >= 1, "eig_max_iter must be >= 1");
  require(c.runs >= 1, "runs must be >= 1");
  for (double b : c.budget_sweep) require(b >= 0.0, "budget_sweep entries must be >= 0");
  require(c.workers >= 1, "workers must be >= 1");
  require(!c.output.empty(), "output must be set");
}

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const Field* f = find_field(key);
    if (!f) throw ParseError("unknown key '" + key + "'", line_no);
    if (!set(c, f->member, value)) throw ParseError("bad value '" + value + "' for " + key, line_no);
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const PipelineConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.key) + " = " + get(config, f.member) + "\n";
  return out;
}

void save_config(const PipelineConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << format_config(config);
}

}  // namespace specsparse
