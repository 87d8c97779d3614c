#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "drboost/experiments.hpp"

using namespace drboost;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parse a numeric CSV (header + rows) for aggregate checks.
std::vector<std::vector<double>> rowsOf(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

ExperimentConfig smallCoverageConfig(const std::string& outDir) {
  ExperimentConfig cfg;
  cfg.experiment = "coverage-monotone";
  cfg.algorithms = {{"bga", {{"B", 2.0}}}, {"sga", {}}};
  cfg.seeds = {1, 2};
  cfg.outDir = outDir;
  cfg.params = {{"k", 3.0}, {"T", 25.0}, {"noise", 0.01}};
  return cfg;
}

}  // namespace

TEST_CASE("experiment registry") {
  CHECK(known_experiments().size() == 12);
  for (const auto& id : known_experiments()) CHECK(!id.empty());
}

TEST_CASE("config round-trips through JSON") {
  ExperimentConfig cfg = smallCoverageConfig("results_rt");
  ExperimentConfig back = ExperimentConfig::fromJson(cfg.toJson());
  CHECK(back.experiment == cfg.experiment);
  CHECK(back.outDir == cfg.outDir);
  CHECK(back.seeds == cfg.seeds);
  CHECK(back.params == cfg.params);
  REQUIRE(back.algorithms.size() == cfg.algorithms.size());
  for (size_t i = 0; i < cfg.algorithms.size(); ++i) {
    CHECK(back.algorithms[i].id == cfg.algorithms[i].id);
    CHECK(back.algorithms[i].params == cfg.algorithms[i].params);
  }
}

TEST_CASE("invalid configurations are rejected with the valid ids") {
  const char* unknownId = R"({"experiment":"nope","algorithms":["bga"],"seeds":[1]})";
  try {
    ExperimentConfig::fromJson(unknownId);
    FAIL("expected a configuration error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("coverage-monotone") != std::string::npos);
  }

  const char* wrongAlg =
      R"({"experiment":"coverage-monotone","algorithms":["obga"],"seeds":[1]})";
  CHECK_THROWS_AS(ExperimentConfig::fromJson(wrongAlg), ConfigError);

  const char* noSeeds =
      R"({"experiment":"coverage-monotone","algorithms":["bga"],"seeds":[]})";
  CHECK_THROWS_AS(ExperimentConfig::fromJson(noSeeds), ConfigError);

  CHECK_THROWS_AS(ExperimentConfig::fromJson("{not json"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::fromJsonFile("no_such_config.json"), ConfigError);
}

TEST_CASE("experiment runs write per-seed and mean CSVs") {
  const std::string outDir = "results_harness_run";
  fs::remove_all(outDir);
  ExperimentConfig cfg = smallCoverageConfig(outDir);
  std::vector<std::string> files = run_experiment(cfg);
  // 2 algorithms x (2 seeds + 1 mean) = 6 files.
  CHECK(files.size() == 6);
  for (const auto& f : files) CHECK(fs::exists(f));

  // The aggregate is the arithmetic mean of the per-seed rows.
  auto s1 = rowsOf(fs::path(outDir) / "coverage-monotone__bga_seed1.csv");
  auto s2 = rowsOf(fs::path(outDir) / "coverage-monotone__bga_seed2.csv");
  auto mean = rowsOf(fs::path(outDir) / "coverage-monotone__bga_mean.csv");
  REQUIRE(mean.size() == s1.size());
  for (size_t r = 0; r < mean.size(); ++r)
    for (size_t c = 0; c < mean[r].size(); ++c)
      CHECK(mean[r][c] == doctest::Approx(0.5 * (s1[r][c] + s2[r][c])).epsilon(1e-9));
  // Every trace row is marked feasible.
  for (const auto& row : s1) CHECK(row[3] == 1.0);

  fs::remove_all(outDir);
}

TEST_CASE("repeated runs are byte-identical and plot data is deterministic") {
  const std::string dirA = "results_det_a", dirB = "results_det_b";
  fs::remove_all(dirA);
  fs::remove_all(dirB);
  ExperimentConfig cfg = smallCoverageConfig(dirA);
  run_experiment(cfg);
  cfg.outDir = dirB;
  run_experiment(cfg);

  for (const auto& entry : fs::directory_iterator(dirA)) {
    fs::path other = fs::path(dirB) / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
  }

  auto plotsA = emit_plot_data(dirA);
  auto plotsB = emit_plot_data(dirB);
  REQUIRE(plotsA.size() == 1);
  CHECK(slurp(plotsA[0]) == slurp(plotsB[0]));
  {
    std::ifstream in(plotsA[0]);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,series_name,y");
    std::string row;
    std::getline(in, row);
    CHECK(row.find(",bga,") != std::string::npos);
  }
  fs::remove_all(dirA);
  fs::remove_all(dirB);

  CHECK_THROWS_AS(emit_plot_data("no_such_dir"), ConfigError);
}

TEST_CASE("invariant suite routing") {
  InvariantReport geo = run_invariant_suite("geometry");
  CHECK(!geo.checks.empty());
  for (const auto& c : geo.checks) CHECK(c.suite == "geometry");
  CHECK(geo.violations() == 0);
  CHECK_THROWS_AS(run_invariant_suite("bogus"), ConfigError);
}
