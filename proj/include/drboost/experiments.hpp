#pragma once

#include <map>
#include <string>
#include <vector>

#include "drboost/types.hpp"

namespace drboost {

struct AlgorithmSpec {
  std::string id;
  std::map<std::string, double> params;
};

struct ExperimentConfig {
  std::string experiment;
  std::vector<AlgorithmSpec> algorithms;
  std::vector<uint64_t> seeds;
  std::string outDir = "results";
  std::map<std::string, double> params;  // experiment-level overrides (T, k, n, ...)

  static ExperimentConfig fromJson(const std::string& text);
  static ExperimentConfig fromJsonFile(const std::string& path);
  std::string toJson() const;
};

const std::vector<std::string>& known_experiments();

// Runs every (algorithm, seed) pair, writing one CSV per pair plus a
// per-algorithm mean-aggregated CSV. Returns the written file paths.
std::vector<std::string> run_experiment(const ExperimentConfig& cfg);

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double worstMargin = 0.0;  // most negative slack observed (0 when clean)
  std::string detail;
};

struct InvariantReport {
  std::vector<CheckResult> checks;
  int violations() const;
};

// Randomized self-checks of the library invariants, grouped by suite tag
// (geometry, objectives, boosting, offline, online, bandit, minimax).
// An empty filter runs everything.
InvariantReport run_invariant_suite(const std::string& filter = "");

// Reshapes the mean-aggregated CSVs in `resultDir` into per-experiment
// plot files with columns x, series_name, y.
std::vector<std::string> emit_plot_data(const std::string& resultDir);

}  // namespace drboost
