#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace specsparse {

struct AccuracyReport {
  double acc = 0.0;
  int matched = 0;
  int n = 0;
  std::vector<int> cluster_ids;             // distinct predicted ids, ascending
  std::vector<int> truth_ids;               // distinct truth labels, ascending
  std::vector<int> mapping;                 // per cluster id: index into truth_ids, or -1
  std::vector<std::vector<int>> confusion;  // truth x cluster counts
};

/// Maximum-weight assignment on a square matrix; returns the column chosen
/// for each row.
std::vector<int> hungarian_max(const std::vector<std::vector<double>>& weight);

/// ACC under the best one-to-one cluster-to-class mapping.
AccuracyReport clustering_accuracy(std::span<const int> predicted, std::span<const int> truth);

/// One pipeline run as seen by the aggregator.
struct RunOutcome {
  double acc = 0.0;
  std::map<std::string, double> timings;
};

struct Aggregate {
  int runs = 0;
  double acc_mean = 0.0;
  double acc_std = 0.0;  // population standard deviation
  std::vector<double> accs;
  std::map<std::string, double> timings_mean;
};

/// Runs `run` with seeds master, master+1, ..., master+runs-1. A throwing
/// run aborts the aggregate with an error naming its seed.
Aggregate averaged_run(const std::function<RunOutcome(std::uint64_t)>& run, int runs, std::uint64_t master_seed);

}  // namespace specsparse
