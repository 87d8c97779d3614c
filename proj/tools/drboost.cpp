#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "drboost/experiments.hpp"
#include "drboost/types.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Boosted projected-gradient methods for continuous DR-submodular maximization"};
  app.require_subcommand(1);

  std::string configPath, outDir, filter, plotDir;
  std::vector<uint64_t> seeds;
  int trials = 0;

  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run->add_option("config", configPath, "Path to the experiment config (JSON)")->required();
  run->add_option("--out", outDir, "Override the output directory");
  run->add_option("--seed", seeds, "Override the seed list");
  run->add_option("--trials", trials, "Use seeds 0..trials-1");

  auto* check = app.add_subcommand("check", "Run the library's randomized invariant suite");
  check->add_option("--filter", filter,
                    "Restrict to one suite (geometry, objectives, boosting, offline, online, "
                    "bandit, minimax)");

  auto* plot = app.add_subcommand("plotdata", "Reshape result CSVs into plot-ready series");
  plot->add_option("dir", plotDir, "Directory holding run_experiment outputs")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      drboost::ExperimentConfig cfg = drboost::ExperimentConfig::fromJsonFile(configPath);
      if (!outDir.empty()) cfg.outDir = outDir;
      if (trials > 0) {
        cfg.seeds.clear();
        for (int s = 0; s < trials; ++s) cfg.seeds.push_back(uint64_t(s));
      }
      if (!seeds.empty()) cfg.seeds = seeds;
      auto files = drboost::run_experiment(cfg);
      for (const auto& f : files) std::cout << f << "\n";
      return 0;
    }
    if (check->parsed()) {
      drboost::InvariantReport report = drboost::run_invariant_suite(filter);
      for (const auto& c : report.checks)
        std::printf("[%s] %-55s %s  (worst margin %.3g)\n", c.passed ? "PASS" : "FAIL",
                    (c.suite + ": " + c.name).c_str(), c.passed ? "ok" : "VIOLATION",
                    c.worstMargin);
      std::printf("%zu checks, %d violations\n", report.checks.size(), report.violations());
      return report.violations() == 0 ? 0 : 1;
    }
    auto files = drboost::emit_plot_data(plotDir);
    for (const auto& f : files) std::cout << f << "\n";
    return 0;
  } catch (const drboost::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const drboost::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
