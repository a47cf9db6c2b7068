#pragma once

#include "specsparse/graph.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace specsparse {

/// Labeled point cloud. `points` is n x d, row per instance.
struct Dataset {
  RowMatrix points;
  std::optional<std::vector<int>> labels;  // contiguous ids 0..C-1
  std::vector<std::string> label_names;    // raw label text per id
  std::string name;

  int size() const { return static_cast<int>(points.rows()); }
  int dimensions() const { return static_cast<int>(points.cols()); }
  int num_classes() const { return static_cast<int>(label_names.size()); }
};

/// Comma-separated numeric rows. When `label_column` is set that column is
/// removed from the features and interned as a class label (-1 selects the
/// last column); labels are
/// numbered in ascending order of their raw values (numeric order when every
/// raw label is numeric, lexicographic otherwise).
Dataset load_dense_csv(const std::filesystem::path& path,
                       std::optional<int> label_column = std::nullopt);

/// Sparse "<label> <index>:<value> ..." rows with 1-based, strictly increasing
/// indices; densified with d = largest index seen.
Dataset load_libsvm(const std::filesystem::path& path);

/// Per-feature zero-mean / unit-variance scaling; constant columns are only
/// centered.
void standardize_features(Dataset& data);

/// Textual edge list: "<n> <m>" then m lines "<u> <v> <w>", u < v, weights
/// printed with 17 significant digits so a reload is bit-exact. Lines
/// starting with '#' are comments.
void save_graph(const WeightedGraph& graph, const std::filesystem::path& path);
WeightedGraph load_graph(const std::filesystem::path& path);

/// n rows x k columns, 15 significant digits.
void save_matrix_csv(const Matrix& m, const std::filesystem::path& path);

/// "vertex,cluster" header then one row per vertex.
void save_labels_csv(const std::vector<int>& labels, const std::filesystem::path& path);

/// Reads either the two-column form written by save_labels_csv or a single
/// column of integer labels. A non-numeric first line is treated as a header.
std::vector<int> load_labels_csv(const std::filesystem::path& path);

}  // namespace specsparse
