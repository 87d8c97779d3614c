#include "drboost/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "drboost/bandit.hpp"
#include "drboost/boosting.hpp"
#include "drboost/geometry.hpp"
#include "drboost/minimax.hpp"
#include "drboost/objectives.hpp"
#include "drboost/offline.hpp"
#include "drboost/online.hpp"
#include "drboost/set_function.hpp"

namespace drboost {

namespace fs = std::filesystem;
using nlohmann::json;

// ----------------------------------------------------------- Config

const std::vector<std::string>& known_experiments() {
  static const std::vector<std::string> ids = {
      "coverage-monotone",      "coverage-nonmonotone", "qp-offline-mono",
      "qp-offline-nonmono",     "qp-online-full",       "qp-online-delayed",
      "movie-synthetic-offline", "movie-synthetic-online", "bandit-mono",
      "bandit-nonmono",         "minimax-facility-mono", "minimax-facility-nonmono"};
  return ids;
}

namespace {

const std::map<std::string, std::vector<std::string>>& experimentAlgorithms() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"coverage-monotone", {"bga", "sga", "cg"}},
      {"coverage-nonmonotone", {"bga", "sga", "mfw"}},
      {"qp-offline-mono", {"bga", "sga", "cg"}},
      {"qp-offline-nonmono", {"bga", "sga", "mfw"}},
      {"qp-online-full", {"obga", "oga"}},
      {"qp-online-delayed", {"obga", "oga"}},
      {"movie-synthetic-offline", {"bga", "sga", "cg"}},
      {"movie-synthetic-online", {"obga", "oga"}},
      {"bandit-mono", {"bbga"}},
      {"bandit-nonmono", {"bbga"}},
      {"minimax-facility-mono", {"bgda"}},
      {"minimax-facility-nonmono", {"bgda"}},
  };
  return table;
}

std::string joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

void validateConfig(const ExperimentConfig& cfg) {
  const auto& algs = experimentAlgorithms();
  auto it = algs.find(cfg.experiment);
  if (it == algs.end())
    throw ConfigError("unknown experiment '" + cfg.experiment +
                      "'; valid ids: " + joined(known_experiments()));
  if (cfg.algorithms.empty()) throw ConfigError("config lists no algorithms");
  for (const auto& a : cfg.algorithms)
    if (std::find(it->second.begin(), it->second.end(), a.id) == it->second.end())
      throw ConfigError("algorithm '" + a.id + "' is not valid for " + cfg.experiment +
                        "; valid ids: " + joined(it->second));
  if (cfg.seeds.empty()) throw ConfigError("config lists no seeds");
}

std::map<std::string, double> paramsFromJson(const json& j) {
  std::map<std::string, double> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number())
      throw ConfigError("parameter '" + it.key() + "' must be numeric");
    out[it.key()] = it.value().get<double>();
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::fromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON parse error: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    cfg.experiment = j.at("experiment").get<std::string>();
    for (const auto& a : j.at("algorithms")) {
      AlgorithmSpec spec;
      if (a.is_string()) {
        spec.id = a.get<std::string>();
      } else {
        spec.id = a.at("id").get<std::string>();
        if (a.contains("params")) spec.params = paramsFromJson(a.at("params"));
      }
      cfg.algorithms.push_back(std::move(spec));
    }
    for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<uint64_t>());
    if (j.contains("out")) cfg.outDir = j.at("out").get<std::string>();
    if (j.contains("params")) cfg.params = paramsFromJson(j.at("params"));
    validateConfig(cfg);
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config schema error: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::fromJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return fromJson(ss.str());
}

std::string ExperimentConfig::toJson() const {
  json j;
  j["experiment"] = experiment;
  j["algorithms"] = json::array();
  for (const auto& a : algorithms) {
    json ja;
    ja["id"] = a.id;
    if (!a.params.empty()) ja["params"] = a.params;
    j["algorithms"].push_back(ja);
  }
  j["seeds"] = seeds;
  j["out"] = outDir;
  if (!params.empty()) j["params"] = params;
  return j.dump(2);
}

// -------------------------------------------------------------- CSV

namespace {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string formatNumber(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void writeCsv(const fs::path& path, const Csv& csv) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericError("cannot write " + path.string());
  for (size_t i = 0; i < csv.header.size(); ++i)
    out << (i ? "," : "") << csv.header[i];
  out << "\n";
  for (const auto& row : csv.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << formatNumber(row[i]);
    out << "\n";
  }
}

Csv readCsv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  Csv csv;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty CSV " + path.string());
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) csv.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream rs(line);
    while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

// Arithmetic mean across per-seed tables, row by row (truncated to the
// shortest table; columns must agree).
Csv meanCsv(const std::vector<Csv>& tables) {
  Csv out;
  out.header = tables.front().header;
  size_t rows = tables.front().rows.size();
  for (const auto& t : tables) rows = std::min(rows, t.rows.size());
  for (size_t r = 0; r < rows; ++r) {
    std::vector<double> row(out.header.size(), 0.0);
    for (const auto& t : tables)
      for (size_t c = 0; c < row.size(); ++c) row[c] += t.rows[r][c];
    for (auto& v : row) v /= double(tables.size());
    out.rows.push_back(std::move(row));
  }
  return out;
}

double param(const std::map<std::string, double>& params, const std::string& key, double dflt) {
  auto it = params.find(key);
  return it == params.end() ? dflt : it->second;
}

// ------------------------------------------------- Shared instances

// Mean of a sequence of objectives (used to build online comparators).
class AverageObjective final : public Objective {
 public:
  explicit AverageObjective(std::vector<std::shared_ptr<const Objective>> fs)
      : fs_(std::move(fs)) {
    if (fs_.empty()) throw ConfigError("AverageObjective: empty sequence");
  }
  Eigen::Index dim() const override { return fs_.front()->dim(); }
  double value(const Vector& x) const override {
    double v = 0.0;
    for (const auto& f : fs_) v += f->value(x);
    return v / double(fs_.size());
  }
  Vector grad(const Vector& x) const override {
    Vector g = Vector::Zero(dim());
    for (const auto& f : fs_) g += f->grad(x);
    return g / double(fs_.size());
  }
  double smoothness() const override { return fs_.front()->smoothness(); }
  double lipschitz() const override { return fs_.front()->lipschitz(); }
  bool monotone() const override {
    for (const auto& f : fs_)
      if (!f->monotone()) return false;
    return true;
  }

 private:
  std::vector<std::shared_ptr<const Objective>> fs_;
};

PackingPolytope randomPacking(Eigen::Index n, Eigen::Index m, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix A(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = unif(rng);
  return PackingPolytope(std::move(A), Vector::Ones(m), Vector::Ones(n));
}

std::shared_ptr<SetFunction> tabulate(const SetFunction& f) {
  std::vector<double> table(1ull << f.groundSize());
  for (uint64_t m = 0; m < table.size(); ++m) table[m] = f.eval(m);
  return std::make_shared<TableSetFunction>(f.groundSize(), std::move(table), f.monotone(),
                                            f.submodular());
}

Csv offlineTraceCsv(const RunTrace& trace, const ConstraintSet& C) {
  Csv csv;
  csv.header = {"t", "value", "step_size", "feasible"};
  for (size_t t = 0; t < trace.values.size(); ++t) {
    const double step = t == 0 ? 0.0 : trace.stepSizes[t - 1];
    csv.rows.push_back({double(t + 1), trace.values[t], step,
                        C.contains(trace.iterates[t]) ? 1.0 : 0.0});
  }
  return csv;
}

// Frank-Wolfe trajectories recorded step by step for plotting parity with
// the ascent traces.
Csv frankWolfeCsv(const Objective& f, const ConstraintSet& C, int K, bool measured) {
  Csv csv;
  csv.header = {"t", "value", "step_size", "feasible"};
  Vector x = Vector::Zero(C.dim());
  if (!C.contains(x)) x = C.minInfNormPoint();
  Vector u;
  if (measured) u = C.upperBound();
  for (int k = 0; k < K; ++k) {
    if (measured) {
      Vector slack = u - x;
      Vector v = linear_maximize(C, f.grad(x).cwiseProduct(slack));
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (u[i] > 0.0) x[i] += v[i] * slack[i] / (u[i] * double(K));
    } else {
      x += linear_maximize(C, f.grad(x)) / double(K);
    }
    csv.rows.push_back({double(k + 1), f.value(x), 1.0 / double(K),
                        C.contains(x, 1e-6) ? 1.0 : 0.0});
  }
  return csv;
}

Csv regretCsv(const std::vector<RegretPoint>& series) {
  Csv csv;
  csv.header = {"t", "reward", "cumulative_reward", "regret", "ratio"};
  for (const auto& p : series)
    csv.rows.push_back({double(p.t), p.reward, p.cumulativeReward, p.regret, p.ratio});
  return csv;
}

Csv banditCsv(const BanditTrace& trace) {
  Csv csv;
  csv.header = {"t", "mode", "reward", "z", "feasible"};
  for (const auto& r : trace.rounds)
    csv.rows.push_back({double(r.t), r.explore ? 1.0 : 0.0, r.reward, r.z,
                        r.feasible ? 1.0 : 0.0});
  return csv;
}

// ------------------------------------------------ Experiment runners

Csv runOfflineFamily(const std::string& expId, const AlgorithmSpec& alg, uint64_t seed,
                     const std::map<std::string, double>& P) {
  Rng instRng(seed ^ 0xabcdef12345ull);
  std::shared_ptr<Objective> f;
  std::shared_ptr<ConstraintSet> C;
  std::optional<Vector> start;
  const double noise = param(P, "noise", 0.01);

  if (expId == "coverage-monotone") {
    const int k = int(param(P, "k", 10));
    auto obj = std::make_shared<CoverageMonotone>(k);
    C = std::make_shared<CardinalityPolytope>(obj->dim(), double(k));
    start = obj->localMaxPoint();
    f = obj;
  } else if (expId == "coverage-nonmonotone") {
    const int k = int(param(P, "k", 10));
    auto obj = std::make_shared<CoverageNonMonotone>(k);
    C = std::make_shared<BoxConstraint>(obj->dim());
    start = obj->stationaryPoint();
    f = obj;
  } else if (expId == "qp-offline-mono" || expId == "qp-offline-nonmono") {
    const Eigen::Index n = Eigen::Index(param(P, "n", 25));
    const Eigen::Index m = std::max<Eigen::Index>(1, Eigen::Index(0.2 * double(n)));
    const bool mono = expId == "qp-offline-mono";
    f = std::make_shared<QuadraticObjective>(mono ? make_monotone_quadratic(n, instRng)
                                                  : make_nonmonotone_quadratic(n, instRng));
    C = std::make_shared<PackingPolytope>(randomPacking(n, m, instRng));
  } else {  // movie-synthetic-offline
    const Eigen::Index users = Eigen::Index(param(P, "users", 100));
    const Eigen::Index movies = Eigen::Index(param(P, "movies", 10));
    const double k = param(P, "k", 5);
    auto base = tabulate(FacilityLocationSetFunction(synthetic_ratings(users, movies, instRng)));
    f = std::make_shared<MultilinearObjective>(base);
    C = std::make_shared<CardinalityPolytope>(movies, k);
  }
  f->setNoiseScale(noise);

  if (alg.id == "cg") return frankWolfeCsv(*f, *C, int(param(alg.params, "K", 500)), false);
  if (alg.id == "mfw") return frankWolfeCsv(*f, *C, int(param(alg.params, "K", 500)), true);

  OfflineConfig cfg;
  cfg.T = int(param(P, "T", 200));
  cfg.batch = int(param(alg.params, "B", param(P, "B", 5)));
  cfg.option = f->monotone() ? AscentOption::I : AscentOption::II;
  cfg.seed = seed;
  cfg.start = start;
  const double eta = param(alg.params, "eta", 0.0);
  if (eta > 0.0) {
    cfg.stepSchedule = StepSchedule::Constant;
    cfg.eta = eta;
  }
  RunTrace trace = alg.id == "bga" ? boosting_gradient_ascent(*f, *C, cfg)
                                   : sga_baseline(*f, *C, cfg);
  return offlineTraceCsv(trace, *C);
}

struct OnlineInstance {
  OnlineEnv env;
  std::shared_ptr<ConstraintSet> C;
  std::shared_ptr<Objective> average;
  bool monotone = true;
};

OnlineInstance buildOnlineInstance(const std::string& expId, uint64_t seed,
                                   const std::map<std::string, double>& P) {
  Rng instRng(seed ^ 0x5deece66dull);
  OnlineInstance inst;
  const int T = int(param(P, "T", 150));
  const double noise = param(P, "noise", 0.01);

  if (expId == "qp-online-full" || expId == "qp-online-delayed") {
    const Eigen::Index n = Eigen::Index(param(P, "n", 10));
    inst.C = std::make_shared<PackingPolytope>(randomPacking(n, 2, instRng));
    for (int t = 0; t < T; ++t) {
      auto f = std::make_shared<QuadraticObjective>(make_monotone_quadratic(n, instRng));
      f->setNoiseScale(noise);
      inst.env.objectives.push_back(f);
    }
    inst.monotone = true;
    inst.env.delays = expId == "qp-online-delayed"
                          ? delay_uniform(T, int(param(P, "delay_lo", 1)),
                                          int(param(P, "delay_hi", 5)), seed ^ 0x77ull)
                          : delay_constant(T, int(param(P, "delay", 1)));
  } else {  // movie-synthetic-online
    const Eigen::Index users = Eigen::Index(param(P, "batch_users", 15));
    const Eigen::Index movies = Eigen::Index(param(P, "movies", 10));
    const double k = param(P, "k", 5);
    const double lambda = param(P, "lambda", 0.1);
    inst.C = std::make_shared<CardinalityPolytope>(movies, k);
    std::vector<double> avgTable(1ull << movies, 0.0);
    for (int t = 0; t < T; ++t) {
      auto fac = std::make_shared<FacilityLocationSetFunction>(
          synthetic_ratings(users, movies, instRng));
      auto reg = tabulate(RegularizedSetFunction(fac, lambda, k));
      for (uint64_t m = 0; m < avgTable.size(); ++m) avgTable[m] += reg->eval(m) / double(T);
      inst.env.objectives.push_back(std::make_shared<MultilinearObjective>(reg, 1));
    }
    inst.monotone = false;
    inst.env.delays = delay_constant(T, int(param(P, "delay", 1)));
    // The mean of multilinear extensions is the multilinear extension of
    // the mean table, which is far cheaper to differentiate.
    inst.average = std::make_shared<MultilinearObjective>(std::make_shared<TableSetFunction>(
        int(movies), std::move(avgTable), false, true));
    return inst;
  }
  inst.average =
      std::make_shared<AverageObjective>(std::vector<std::shared_ptr<const Objective>>(
          inst.env.objectives.begin(), inst.env.objectives.end()));
  return inst;
}

Csv runOnlineFamily(const std::string& expId, const AlgorithmSpec& alg, uint64_t seed,
                    const std::map<std::string, double>& P) {
  OnlineInstance inst = buildOnlineInstance(expId, seed, P);
  const AscentOption option = inst.monotone ? AscentOption::I : AscentOption::II;
  const double coeff = inst.monotone ? 1.0 - std::exp(-1.0) : 3.0 / 8.0;
  double eta = param(alg.params, "eta", 0.0);
  if (eta <= 0.0) {
    const double G = estimate_gradient_bound(inst.env, *inst.C, coeff, seed ^ 0x1234ull);
    eta = inst.C->diameter() / (G * std::sqrt(double(inst.env.totalDelay())));
  }
  const int batch = int(param(alg.params, "B", 1));

  OnlineTrace trace = alg.id == "obga"
                          ? obga_run(inst.env, *inst.C, option, eta, seed, batch)
                          : oga_baseline(inst.env, *inst.C, eta, seed, batch);

  const int K = int(param(P, "comparatorK", 500));
  Vector comparator = inst.monotone ? continuous_greedy_fw(*inst.average, *inst.C, K)
                                    : measured_fw(*inst.average, *inst.C, K);
  std::vector<double> comparatorValues;
  for (const auto& f : inst.env.objectives) comparatorValues.push_back(f->value(comparator));
  const double alpha = inst.monotone ? 1.0 - std::exp(-1.0) : 0.25;
  return regretCsv(regret_series(trace.rewards, comparatorValues, alpha));
}

Csv runBanditFamily(const std::string& expId, const AlgorithmSpec& alg, uint64_t seed,
                    const std::map<std::string, double>& P) {
  Rng instRng(seed ^ 0xfeedbeefull);
  const Eigen::Index n = Eigen::Index(param(P, "n", 8));
  const bool mono = expId == "bandit-mono";
  auto f = std::make_shared<QuadraticObjective>(mono ? make_monotone_quadratic(n, instRng)
                                                     : make_nonmonotone_quadratic(n, instRng));
  auto C = std::make_shared<BoxConstraint>(n);

  BanditConfig cfg;
  cfg.T = int(param(P, "T", 2000));
  cfg.option = mono ? AscentOption::I : AscentOption::II;
  cfg.seed = seed;
  cfg.lambda = param(alg.params, "lambda", 0.0);
  cfg.delta = param(alg.params, "delta", 0.0);
  cfg.eta = param(alg.params, "eta", 0.0);

  OnlineEnv env;
  env.objectives.assign(size_t(cfg.T), f);
  env.delays = delay_constant(cfg.T, 1);
  return banditCsv(bbga_run(env, *C, cfg));
}

Csv runMinimaxFamily(const std::string& expId, const AlgorithmSpec& alg, uint64_t seed,
                     const std::map<std::string, double>& P) {
  Rng instRng(seed ^ 0x0ddba11ull);
  const bool mono = expId == "minimax-facility-mono";
  const int blockDim = int(param(P, "m", 2));
  const int ground = int(param(P, "n", 3));
  const int k = int(param(P, "k", 2));
  auto obj = make_convex_facility(blockDim, ground, k, param(P, "lambda", 0.1), !mono, instRng);
  RingBlockConstraint K(ground, blockDim, 0.1, 1.0);
  CardinalityPolytope M(ground, double(k));

  MinimaxConfig cfg;
  cfg.T = int(param(P, "T", 1000));
  cfg.option = mono ? AscentOption::I : AscentOption::II;
  cfg.seed = seed;
  cfg.eta = param(alg.params, "eta", 0.0);
  cfg.sampleBatch = int(param(alg.params, "B", 1));
  MinimaxResult result = boosting_gda(obj, K, M, cfg);

  Csv csv;
  csv.header = {"t", "eval_greedy"};
  const MaxSetMode mode = mono ? MaxSetMode::Greedy : MaxSetMode::Distorted;
  for (size_t t = 0; t < result.xIterates.size(); ++t)
    csv.rows.push_back({double(t + 1), minimax_eval(obj, result.xIterates[t], k, mode)});
  return csv;
}

Csv runOne(const ExperimentConfig& cfg, const AlgorithmSpec& alg, uint64_t seed) {
  const std::string& id = cfg.experiment;
  if (id.rfind("coverage", 0) == 0 || id.rfind("qp-offline", 0) == 0 ||
      id == "movie-synthetic-offline")
    return runOfflineFamily(id, alg, seed, cfg.params);
  if (id.rfind("qp-online", 0) == 0 || id == "movie-synthetic-online")
    return runOnlineFamily(id, alg, seed, cfg.params);
  if (id.rfind("bandit", 0) == 0) return runBanditFamily(id, alg, seed, cfg.params);
  return runMinimaxFamily(id, alg, seed, cfg.params);
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentConfig& cfg) {
  validateConfig(cfg);
  fs::create_directories(cfg.outDir);
  std::vector<std::string> written;
  for (const auto& alg : cfg.algorithms) {
    std::vector<Csv> perSeed;
    for (uint64_t seed : cfg.seeds) {
      Csv csv = runOne(cfg, alg, seed);
      fs::path path = fs::path(cfg.outDir) /
                      (cfg.experiment + "__" + alg.id + "_seed" + std::to_string(seed) + ".csv");
      writeCsv(path, csv);
      written.push_back(path.string());
      perSeed.push_back(std::move(csv));
    }
    fs::path meanPath =
        fs::path(cfg.outDir) / (cfg.experiment + "__" + alg.id + "_mean.csv");
    writeCsv(meanPath, meanCsv(perSeed));
    written.push_back(meanPath.string());
  }
  return written;
}

// -------------------------------------------------- Invariant suite

namespace {

void addCheck(InvariantReport& report, const std::string& suite, const std::string& name,
              bool passed, double margin, const std::string& detail = "") {
  report.checks.push_back({suite, name, passed, margin, detail});
}

Vector randomBoxPoint(Eigen::Index n, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = unif(rng);
  return x;
}

void geometryChecks(InvariantReport& report) {
  Rng rng(7);
  const Eigen::Index n = 6;
  std::vector<std::shared_ptr<ConstraintSet>> sets;
  sets.push_back(std::make_shared<BoxConstraint>(n));
  sets.push_back(std::make_shared<CardinalityPolytope>(n, 2.0));
  {
    Rng prng(3);
    sets.push_back(std::make_shared<PackingPolytope>(randomPacking(n, 2, prng)));
  }
  double worstIdem = 0.0, worstExp = 0.0, worstBcg = 0.0;
  bool member = true;
  for (const auto& C : sets) {
    for (int i = 0; i < 300; ++i) {
      Vector x = randomBoxPoint(n, -2.0, 3.0, rng);
      Vector y = randomBoxPoint(n, -2.0, 3.0, rng);
      Vector px = C->project(x), py = C->project(y);
      worstIdem = std::max(worstIdem, (C->project(px) - px).norm());
      worstExp = std::max(worstExp, (px - py).norm() - (x - y).norm());
      member = member && C->contains(px);
      Vector z = C->project(randomBoxPoint(n, -1.0, 2.0, rng));
      worstBcg = std::min(worstBcg, (px - x).dot(z - px));
    }
  }
  addCheck(report, "geometry", "projection idempotence", worstIdem <= 1e-8, -worstIdem);
  addCheck(report, "geometry", "projection non-expansiveness", worstExp <= 1e-8, -worstExp);
  addCheck(report, "geometry", "projected points feasible", member, member ? 0.0 : -1.0);
  addCheck(report, "geometry", "projection optimality inequality", worstBcg >= -1e-7, worstBcg);

  // Cardinality bisection agrees with the generic alternating projection.
  CardinalityPolytope card(n, 2.0);
  PackingPolytope asPacking(Matrix::Ones(1, n), Vector::Constant(1, 2.0), Vector::Ones(n));
  double worstAgree = 0.0;
  for (int i = 0; i < 100; ++i) {
    Vector x = randomBoxPoint(n, -1.0, 2.0, rng);
    worstAgree = std::max(worstAgree, (card.project(x) - asPacking.project(x)).norm());
  }
  addCheck(report, "geometry", "cardinality vs alternating projection", worstAgree <= 1e-6,
           -worstAgree);

  // Shrunken-set members keep a safety margin inside the base set.
  auto base = std::make_shared<BoxConstraint>(n);
  const double deltaPrime = 0.25, R = 0.5;
  MinkowskiSet shr(base, Vector::Constant(n, 0.5), deltaPrime);
  bool interior = true;
  for (int i = 0; i < 100; ++i) {
    Vector x = shr.project(randomBoxPoint(n, -1.0, 2.0, rng));
    Vector v = sphere_sample(n, rng);
    interior = interior && base->contains(x + (deltaPrime / (1.0 + deltaPrime)) * R * v);
  }
  addCheck(report, "geometry", "shrunken-set interior margin", interior, interior ? 0.0 : -1.0);
}

void objectiveChecks(InvariantReport& report) {
  Rng rng(11);
  std::vector<std::shared_ptr<Objective>> fs;
  fs.push_back(std::make_shared<QuadraticObjective>(make_monotone_quadratic(6, rng)));
  fs.push_back(std::make_shared<QuadraticObjective>(make_nonmonotone_quadratic(6, rng)));
  fs.push_back(std::make_shared<CoverageMonotone>(3));
  fs.push_back(std::make_shared<CoverageNonMonotone>(3));
  double worstRel = 0.0;
  for (const auto& f : fs) {
    for (int i = 0; i < 25; ++i) {
      Vector x = randomBoxPoint(f->dim(), 0.05, 0.95, rng);
      Vector g = f->grad(x);
      for (Eigen::Index j = 0; j < f->dim(); ++j) {
        Vector e = Vector::Zero(f->dim());
        e[j] = 1e-5;
        double fd = (f->value(x + e) - f->value(x - e)) / 2e-5;
        worstRel = std::max(worstRel, std::abs(fd - g[j]) / std::max(1.0, std::abs(g[j])));
      }
    }
  }
  addCheck(report, "objectives", "analytic gradients match finite differences",
           worstRel <= 1e-4, -worstRel);

  double worstMono = 0.0;
  for (int i = 0; i < 100; ++i) {
    Vector x = randomBoxPoint(fs[0]->dim(), 0.0, 1.0, rng);
    worstMono = std::min(worstMono, fs[0]->grad(x).minCoeff());
    worstMono = std::min(worstMono, fs[2]->grad(Vector(randomBoxPoint(7, 0.0, 1.0, rng))).minCoeff());
  }
  addCheck(report, "objectives", "monotone gradients are nonnegative", worstMono >= -1e-9,
           worstMono);
}

void boostingChecks(InvariantReport& report) {
  Rng rng(13);
  // Sampler distribution versus analytic inverse transform.
  double worstKs = 0.0;
  for (double gamma : {0.3, 0.7, 1.0}) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int N = 20000;
    std::vector<double> zs(N);
    for (auto& z : zs) z = sample_z_up(gamma, unif(rng));
    std::sort(zs.begin(), zs.end());
    for (int i = 0; i < N; ++i) {
      double cdf = (std::exp(gamma * zs[size_t(i)]) - 1.0) / (std::exp(gamma) - 1.0);
      worstKs = std::max(worstKs, std::abs(cdf - double(i + 1) / N));
    }
  }
  addCheck(report, "boosting", "mixing sampler distribution", worstKs < 0.01, 0.01 - worstKs);

  // On a linear objective the weighted gradient integral is closed-form.
  const Eigen::Index n = 5;
  Matrix H = Matrix::Zero(n, n);
  Vector a = randomBoxPoint(n, 0.1, 1.0, rng);
  QuadraticObjective lin(H, a, 0.0, Vector::Ones(n), true);
  BoostSpec spec = BoostSpec::monotoneSpec(1.0);
  Vector q = nonoblivious_grad_quadrature(spec, lin, Vector::Constant(n, 0.4));
  double gap = (q - (1.0 - std::exp(-1.0)) * a).norm();
  addCheck(report, "boosting", "weighted gradient integral on linear objective", gap <= 1e-8,
           -gap);

  Rng qrng(17);
  QuadraticObjective quad = make_monotone_quadratic(6, qrng);
  BoxConstraint box(6);
  auto rep = check_corollary_inequalities(quad, box, 100, qrng);
  addCheck(report, "boosting", "first-order approximation inequality sweep",
           rep.violations == 0, rep.worstMargin);
  QuadraticObjective quadN = make_nonmonotone_quadratic(6, qrng);
  auto repN = check_corollary_inequalities(quadN, box, 100, qrng);
  addCheck(report, "boosting", "first-order inequality sweep (non-monotone)",
           repN.violations == 0, repN.worstMargin);
}

void offlineChecks(InvariantReport& report) {
  Rng rng(19);
  QuadraticObjective f = make_monotone_quadratic(6, rng);
  f.setNoiseScale(0.01);
  CardinalityPolytope C(6, 2.0);
  OfflineConfig cfg;
  cfg.T = 60;
  cfg.seed = 42;
  RunTrace t1 = boosting_gradient_ascent(f, C, cfg);
  RunTrace t2 = boosting_gradient_ascent(f, C, cfg);
  bool feasible = true;
  for (const auto& x : t1.iterates) feasible = feasible && C.contains(x);
  addCheck(report, "offline", "every iterate feasible", feasible, feasible ? 0.0 : -1.0);
  bool identical = t1.values == t2.values && t1.selectedIndex == t2.selectedIndex;
  addCheck(report, "offline", "same seed reproduces the trace", identical,
           identical ? 0.0 : -1.0);
}

void onlineChecks(InvariantReport& report) {
  Rng rng(23);
  OnlineEnv env;
  const int T = 40;
  for (int t = 0; t < T; ++t) {
    auto f = std::make_shared<QuadraticObjective>(make_monotone_quadratic(5, rng));
    env.objectives.push_back(f);
  }
  env.delays = delay_uniform(T, 1, 5, 5);
  BoxConstraint C(5);
  OnlineTrace trace = obga_run(env, C, AscentOption::I, 0.05, 9);
  int delivered = 0;
  for (int c : trace.feedbackCounts) delivered += c;
  bool onceEach = delivered + trace.dropped == T;
  addCheck(report, "online", "each round's feedback delivered exactly once or dropped",
           onceEach, onceEach ? 0.0 : -1.0);

  env.delays = std::vector<int>(size_t(T));
  for (int t = 0; t < T; ++t) env.delays[size_t(t)] = T - t + 1;
  OnlineTrace frozen = obga_run(env, C, AscentOption::I, 0.05, 9);
  double drift = 0.0;
  for (const auto& p : frozen.played) drift = std::max(drift, (p - frozen.played[0]).norm());
  addCheck(report, "online", "no feedback implies constant iterates", drift == 0.0, -drift);

  std::vector<double> rewards(10, 2.0);
  auto series = regret_series(rewards, rewards, 1.0);
  double worst = 0.0;
  for (const auto& p : series) worst = std::max(worst, std::abs(p.regret));
  addCheck(report, "online", "regret vanishes against itself", worst == 0.0, -worst);
}

void banditChecks(InvariantReport& report) {
  Rng rng(29);
  auto f = std::make_shared<QuadraticObjective>(make_monotone_quadratic(6, rng));
  BoxConstraint C(6);
  BanditConfig cfg;
  cfg.T = 2000;
  cfg.seed = 31;
  OnlineEnv env;
  env.objectives.assign(size_t(cfg.T), f);
  env.delays = delay_constant(cfg.T, 1);
  BanditTrace trace = bbga_run(env, C, cfg);
  addCheck(report, "bandit", "every played point feasible", trace.feasibilityViolations == 0,
           -double(trace.feasibilityViolations));
  BanditConfig resolved = resolve_bandit_defaults(cfg, 6, 0.5);
  double frac = double(trace.exploreCount) / double(cfg.T);
  double se = 3.0 * std::sqrt(resolved.lambda * (1.0 - resolved.lambda) / double(cfg.T));
  addCheck(report, "bandit", "explore frequency matches the exploration rate",
           std::abs(frac - resolved.lambda) <= se, se - std::abs(frac - resolved.lambda));
  bool exploitZero = true;
  for (const auto& r : trace.rounds)
    if (!r.explore && r.estimate.norm() != 0.0) exploitZero = false;
  addCheck(report, "bandit", "exploit rounds use a zero update", exploitZero,
           exploitZero ? 0.0 : -1.0);
}

void minimaxChecks(InvariantReport& report) {
  Rng rng(37);
  auto obj = make_convex_facility(2, 3, 2, 0.1, false, rng);
  RingBlockConstraint K(3, 2, 0.1, 1.0);
  CardinalityPolytope M(3, 2.0);
  MinimaxConfig cfg;
  cfg.T = 200;
  cfg.seed = 41;
  MinimaxResult res = boosting_gda(obj, K, M, cfg);
  bool feasible = true;
  for (const auto& x : res.xIterates) feasible = feasible && K.contains(x);
  for (const auto& y : res.yIterates) feasible = feasible && M.contains(y);
  addCheck(report, "minimax", "iterates feasible on both sides", feasible,
           feasible ? 0.0 : -1.0);

  Vector mean = Vector::Zero(K.dim());
  for (const auto& x : res.xIterates) mean += x;
  mean /= double(res.xIterates.size());
  double gap = (mean - res.xSol).norm();
  addCheck(report, "minimax", "solution equals the iterate average", gap <= 1e-12, -gap);

  double greedy = minimax_eval(obj, res.xSol, 2, MaxSetMode::Greedy);
  double enumd = minimax_eval(obj, res.xSol, 2, MaxSetMode::Enumerate);
  addCheck(report, "minimax", "greedy never exceeds enumeration", greedy <= enumd + 1e-12,
           enumd - greedy);
}

}  // namespace

int InvariantReport::violations() const {
  int v = 0;
  for (const auto& c : checks)
    if (!c.passed) ++v;
  return v;
}

InvariantReport run_invariant_suite(const std::string& filter) {
  static const std::vector<std::string> suites = {"geometry", "objectives", "boosting",
                                                  "offline",  "online",     "bandit",
                                                  "minimax"};
  if (!filter.empty() && std::find(suites.begin(), suites.end(), filter) == suites.end())
    throw ConfigError("unknown suite filter '" + filter + "'; valid: " + joined(suites));
  InvariantReport report;
  auto want = [&](const char* s) { return filter.empty() || filter == s; };
  if (want("geometry")) geometryChecks(report);
  if (want("objectives")) objectiveChecks(report);
  if (want("boosting")) boostingChecks(report);
  if (want("offline")) offlineChecks(report);
  if (want("online")) onlineChecks(report);
  if (want("bandit")) banditChecks(report);
  if (want("minimax")) minimaxChecks(report);
  return report;
}

// ----------------------------------------------------- Plot reshaping

std::vector<std::string> emit_plot_data(const std::string& resultDir) {
  if (!fs::is_directory(resultDir)) throw ConfigError("no such result directory: " + resultDir);
  std::vector<fs::path> meanFiles;
  for (const auto& entry : fs::directory_iterator(resultDir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 9 && name.ends_with("_mean.csv")) meanFiles.push_back(entry.path());
  }
  if (meanFiles.empty()) throw ConfigError("no mean-aggregated CSVs in " + resultDir);
  std::sort(meanFiles.begin(), meanFiles.end());

  // Group by experiment id (text before the "__" separator).
  std::map<std::string, std::vector<fs::path>> groups;
  for (const auto& p : meanFiles) {
    const std::string name = p.filename().string();
    auto sep = name.find("__");
    if (sep == std::string::npos) continue;
    groups[name.substr(0, sep)].push_back(p);
  }

  std::vector<std::string> written;
  for (const auto& [experiment, files] : groups) {
    std::ofstream out(fs::path(resultDir) / ("plot_" + experiment + ".csv"), std::ios::binary);
    out << "x,series_name,y\n";
    for (const auto& file : files) {
      Csv csv = readCsv(file);
      // Prefer the value/ratio column; fall back to the second column.
      size_t yCol = 1;
      for (size_t c = 0; c < csv.header.size(); ++c)
        if (csv.header[c] == "value" || csv.header[c] == "ratio" ||
            csv.header[c] == "eval_greedy")
          yCol = c;
      const std::string name = file.filename().string();
      auto sep = name.find("__");
      std::string series = name.substr(sep + 2, name.size() - sep - 2 - 9);
      for (const auto& row : csv.rows)
        out << formatNumber(row[0]) << "," << series << "," << formatNumber(row[yCol]) << "\n";
    }
    written.push_back((fs::path(resultDir) / ("plot_" + experiment + ".csv")).string());
  }
  return written;
}

}  // namespace drboost
