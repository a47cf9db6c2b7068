#include "specsparse/dataio.hpp"

#include "specsparse/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace specsparse {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return value;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  s = trim(s);
  Int value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

// Interns raw labels to ids in ascending raw order.
void intern_labels(Dataset& data, const std::vector<std::string>& raw) {
  std::vector<std::string> uniq = raw;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  const bool numeric = std::all_of(uniq.begin(), uniq.end(), [](const std::string& s) {
    const auto v = parse_double(s);
    return v && std::isfinite(*v);
  });
  if (numeric) {
    std::stable_sort(uniq.begin(), uniq.end(), [](const std::string& a, const std::string& b) {
      return *parse_double(a) < *parse_double(b);
    });
  }
  std::map<std::string, int> ids;
  for (std::size_t i = 0; i < uniq.size(); ++i) ids[uniq[i]] = static_cast<int>(i);
  std::vector<int> labels;
  labels.reserve(raw.size());
  for (const auto& s : raw) labels.push_back(ids.at(s));
  data.labels = std::move(labels);
  data.label_names = std::move(uniq);
}

std::string format_double(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

}  // namespace

Dataset load_dense_csv(const std::filesystem::path& path, std::optional<int> label_column) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::size_t arity = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split(body, ',');
    if (rows.empty()) {
      arity = fields.size();
      if (label_column && *label_column == -1) label_column = static_cast<int>(arity) - 1;
      if (label_column && (*label_column < 0 || static_cast<std::size_t>(*label_column) >= arity))
        throw ParameterError("label column out of range");
      if (arity < (label_column ? 2u : 1u)) throw ParseError("row has no feature columns", line_no);
    } else if (fields.size() != arity) {
      throw ParseError("ragged row: expected " + std::to_string(arity) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    std::vector<double> row;
    row.reserve(arity);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (label_column && static_cast<int>(c) == *label_column) {
        raw_labels.emplace_back(trim(fields[c]));
        continue;
      }
      const auto v = parse_double(fields[c]);
      if (!v) throw ParseError("cannot parse number '" + std::string(trim(fields[c])) + "'", line_no);
      if (!std::isfinite(*v)) throw ParseError("non-finite value", line_no);
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw EmptyDatasetError(path.string() + ": fewer than two rows");

  Dataset data;
  data.name = path.stem().string();
  data.points.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      data.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  if (label_column) intern_labels(data, raw_labels);
  return data;
}

Dataset load_libsvm(const std::filesystem::path& path) {
  auto in = open_input(path);
  struct Row {
    std::vector<std::pair<int, double>> entries;
  };
  std::vector<Row> rows;
  std::vector<std::string> raw_labels;
  int max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tokens = split_ws(body);
    raw_labels.emplace_back(tokens.front());
    Row row;
    int last = 0;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const auto colon = tokens[i].find(':');
      if (colon == std::string_view::npos) throw ParseError("expected index:value", line_no);
      const auto idx = parse_int<int>(tokens[i].substr(0, colon));
      const auto val = parse_double(tokens[i].substr(colon + 1));
      if (!idx || *idx < 1) throw ParseError("bad feature index", line_no);
      if (!val || !std::isfinite(*val)) throw ParseError("bad feature value", line_no);
      if (*idx <= last) throw ParseError("feature indices not strictly increasing", line_no);
      last = *idx;
      row.entries.emplace_back(*idx, *val);
    }
    max_index = std::max(max_index, last);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyDatasetError(path.string() + ": empty file");
  if (rows.size() < 2) throw EmptyDatasetError(path.string() + ": fewer than two rows");
  if (max_index == 0) throw ParseError("no features present", 0);

  Dataset data;
  data.name = path.stem().string();
  data.points = RowMatrix::Zero(static_cast<Eigen::Index>(rows.size()), max_index);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [idx, val] : rows[r].entries)
      data.points(static_cast<Eigen::Index>(r), idx - 1) = val;
  intern_labels(data, raw_labels);
  return data;
}

void standardize_features(Dataset& data) {
  const double n = static_cast<double>(data.points.rows());
  for (Eigen::Index c = 0; c < data.points.cols(); ++c) {
    auto col = data.points.col(c);
    const double mean = col.sum() / n;
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / n);
    if (sd > 0.0) col /= sd;
  }
}

void save_graph(const WeightedGraph& graph, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << graph.num_vertices() << ' ' << graph.num_edges() << '\n';
  for (const auto& e : graph.edges()) out << e.u << ' ' << e.v << ' ' << format_double(e.w, 17) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

WeightedGraph load_graph(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view& body) {
    while (std::getline(in, line)) {
      ++line_no;
      body = trim(line);
      if (!body.empty() && body.front() != '#') return true;
    }
    return false;
  };

  std::string_view body;
  if (!next_line(body)) throw ParseError("missing header", line_no);
  const auto header = split_ws(body);
  if (header.size() != 2) throw ParseError("malformed header, expected '<n> <m>'", line_no);
  const auto n = parse_int<int>(header[0]);
  const auto m = parse_int<long long>(header[1]);
  if (!n || !m || *n < 0 || *m < 0) throw ParseError("malformed header, expected '<n> <m>'", line_no);

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(*m));
  std::vector<std::size_t> lines;
  lines.reserve(edges.capacity());
  for (long long i = 0; i < *m; ++i) {
    if (!next_line(body)) throw ParseError("expected " + std::to_string(*m) + " edges", line_no);
    const auto tok = split_ws(body);
    if (tok.size() != 3) throw ParseError("expected '<u> <v> <w>'", line_no);
    const auto u = parse_int<int>(tok[0]);
    const auto v = parse_int<int>(tok[1]);
    const auto w = parse_double(tok[2]);
    if (!u || !v || !w) throw ParseError("malformed edge line", line_no);
    if (*u < 0 || *v >= *n || *u >= *v) throw ParseError("edge ids must satisfy 0 <= u < v < n", line_no);
    if (!std::isfinite(*w) || *w <= 0.0) throw ParseError("edge weight must be positive and finite", line_no);
    edges.push_back({*u, *v, *w});
    lines.push_back(line_no);
  }
  if (next_line(body)) throw ParseError("trailing content after edge list", line_no);

  // Duplicate check up front so the error can name the offending line.
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = edges[a];
    const auto& eb = edges[b];
    return ea.u != eb.u ? ea.u < eb.u : ea.v != eb.v ? ea.v < eb.v : a < b;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& a = edges[order[i - 1]];
    const auto& b = edges[order[i]];
    if (a.u == b.u && a.v == b.v) throw ParseError("duplicate edge", lines[order[i]]);
  }
  return WeightedGraph(*n, std::move(edges));
}

void save_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c), 15);
    }
    out << '\n';
  }
}

void save_labels_csv(const std::vector<int>& labels, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "vertex,cluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

std::vector<int> load_labels_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split(body, ',');
    const auto value = parse_int<int>(fields.back());
    if (!value) {
      if (first) {
        first = false;
        continue;
      }
      throw ParseError("expected integer label", line_no);
    }
    if (fields.size() == 2) {
      const auto vertex = parse_int<long long>(fields.front());
      if (!vertex || *vertex != static_cast<long long>(labels.size()))
        throw ParseError("vertex ids must be 0..n-1 in order", line_no);
    } else if (fields.size() != 1) {
      throw ParseError("expected 'vertex,cluster' or a single label column", line_no);
    }
    first = false;
    labels.push_back(*value);
  }
  return labels;
}

}  // namespace specsparse
