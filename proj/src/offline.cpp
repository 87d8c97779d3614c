#include "drboost/offline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace drboost {

namespace {

Vector resolveStart(const ConstraintSet& C, const OfflineConfig& cfg) {
  Vector start = cfg.start ? *cfg.start : C.project(Vector::Zero(C.dim()));
  if (!C.contains(start)) throw ConfigError("offline solver: infeasible start point");
  return start;
}

// Step-size sequence for the configured schedule; `boosted` selects the
// auxiliary-function constants.
std::function<double(int)> makeSchedule(const Objective& f, const ConstraintSet& C,
                                        const OfflineConfig& cfg, bool boosted) {
  switch (cfg.stepSchedule) {
    case StepSchedule::Constant:
      if (cfg.eta <= 0.0) throw ConfigError("offline solver: constant step requires eta > 0");
      return [eta = cfg.eta](int) { return eta; };
    case StepSchedule::Custom:
      if (!cfg.customStep) throw ConfigError("offline solver: custom schedule missing");
      return cfg.customStep;
    case StepSchedule::Theorem:
      break;
  }
  if (cfg.option == AscentOption::II) {
    const double L = f.smoothness();
    if (L <= 0.0) throw ConfigError("offline solver: smoothness constant required");
    return [L](int t) { return 1.0 / (L * std::sqrt(double(t))); };
  }
  const double diam = C.diameter();
  const double sigma = std::sqrt(f.noiseVariance());
  const double rX = std::sqrt(double(f.dim()));
  double sigmaEff, smoothEff;
  if (boosted) {
    BoostingConstants bc =
        boosting_constants(f.weakDr(), f.smoothness(), f.lipschitz(), sigma, rX);
    sigmaEff = std::sqrt(bc.sigmaSq);
    smoothEff = bc.smoothness;
  } else {
    sigmaEff = std::max(sigma, 1e-12);
    smoothEff = f.smoothness();
  }
  return [sigmaEff, smoothEff, diam](int t) {
    return 1.0 / (sigmaEff * std::sqrt(double(t)) / diam + smoothEff);
  };
}

double reportedValue(const Objective& f, const Vector& x, AscentOption option,
                     const Vector& xUnder) {
  return option == AscentOption::I ? f.value(x) : f.value(0.5 * (x + xUnder));
}

RunTrace projectedAscent(const Objective& f, const ConstraintSet& C, const OfflineConfig& cfg,
                         bool boosted) {
  if (cfg.T < 2) throw ConfigError("offline solver: T must be >= 2");
  if (cfg.batch < 1) throw ConfigError("offline solver: batch must be >= 1");
  if (boosted && cfg.option == AscentOption::I && !f.monotone())
    throw ConfigError("offline solver: Option I requires a monotone objective");

  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);
  const Vector xUnder =
      cfg.option == AscentOption::II ? C.minInfNormPoint() : Vector::Zero(C.dim());
  BoostSpec spec = !boosted ? BoostSpec{}
                   : (cfg.option == AscentOption::I ? BoostSpec::monotoneSpec(f.weakDr())
                                                    : BoostSpec::nonMonotoneSpec(xUnder));
  auto schedule = makeSchedule(f, C, cfg, boosted);

  RunTrace trace;
  Vector x = resolveStart(C, cfg);
  trace.iterates.push_back(x);
  trace.values.push_back(reportedValue(f, x, cfg.option, xUnder));
  for (int t = 1; t < cfg.T; ++t) {
    Vector est = Vector::Zero(C.dim());
    for (int b = 0; b < cfg.batch; ++b) {
      if (boosted)
        est += boosted_grad(spec, f, x, rng).estimate;
      else
        est += f.noisyGrad(x, rng);
    }
    est /= double(cfg.batch);
    const double eta = schedule(t);
    trace.stepSizes.push_back(eta);
    x = C.project(x + eta * est);
    trace.iterates.push_back(x);
    trace.values.push_back(reportedValue(f, x, cfg.option, xUnder));
  }

  std::uniform_int_distribution<int> pick(0, cfg.T - 2);
  trace.selectedIndex = pick(rng);
  const Vector& xl = trace.iterates[size_t(trace.selectedIndex)];
  trace.output = cfg.option == AscentOption::I ? xl : Vector(0.5 * (xl + xUnder));
  trace.outputValue = f.value(trace.output);
  trace.wallClockSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return trace;
}

}  // namespace

RunTrace boosting_gradient_ascent(const Objective& f, const ConstraintSet& C,
                                  const OfflineConfig& cfg) {
  return projectedAscent(f, C, cfg, true);
}

RunTrace sga_baseline(const Objective& f, const ConstraintSet& C, const OfflineConfig& cfg) {
  return projectedAscent(f, C, cfg, false);
}

// ---------------------------------------------------- Linear oracles

Vector linear_maximize(const ConstraintSet& C, const Vector& g) {
  requireDim(g, C.dim(), "linear_maximize");
  if (auto* box = dynamic_cast<const BoxConstraint*>(&C)) {
    Vector v(box->dim());
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v[i] = g[i] > 0.0 ? box->upper()[i] : box->lower()[i];
    return v;
  }
  if (auto* card = dynamic_cast<const CardinalityPolytope*>(&C)) {
    std::vector<Eigen::Index> order(size_t(card->dim()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return g[a] > g[b]; });
    Vector v = Vector::Zero(card->dim());
    double remaining = card->budget();
    for (Eigen::Index i : order) {
      if (g[i] <= 0.0 || remaining <= 0.0) break;
      const double take = std::min(card->upper()[i], remaining);
      v[i] = take;
      remaining -= take;
    }
    return v;
  }
  if (auto* pack = dynamic_cast<const PackingPolytope*>(&C)) {
    // Fractional greedy by value-to-cost ratio, then exact repair.
    const Matrix& A = pack->A();
    const Vector& b = pack->b();
    Vector cost = Vector::Zero(pack->dim());
    for (Eigen::Index i = 0; i < pack->dim(); ++i)
      for (Eigen::Index j = 0; j < A.rows(); ++j)
        cost[i] += b[j] > 0.0 ? A(j, i) / b[j] : (A(j, i) > 0.0 ? 1e18 : 0.0);
    std::vector<Eigen::Index> order(size_t(pack->dim()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index c) {
      return g[a] / (cost[a] + 1e-12) > g[c] / (cost[c] + 1e-12);
    });
    Vector v = Vector::Zero(pack->dim());
    Vector used = Vector::Zero(A.rows());
    for (Eigen::Index i : order) {
      if (g[i] <= 0.0) break;
      double cap = pack->upper()[i];
      for (Eigen::Index j = 0; j < A.rows(); ++j)
        if (A(j, i) > 0.0) cap = std::min(cap, (b[j] - used[j]) / A(j, i));
      if (cap <= 0.0) continue;
      v[i] = cap;
      used += cap * A.col(i);
    }
    return pack->contains(v) ? v : pack->project(v);
  }
  throw ConfigError("linear_maximize: unsupported constraint family");
}

Vector continuous_greedy_fw(const Objective& f, const ConstraintSet& C, int K) {
  if (K < 1) throw ConfigError("continuous_greedy_fw: K must be >= 1");
  if (!f.monotone()) throw ConfigError("continuous_greedy_fw: requires a monotone objective");
  Vector x = Vector::Zero(C.dim());
  if (!C.contains(x)) x = C.minInfNormPoint();
  for (int k = 0; k < K; ++k) x += linear_maximize(C, f.grad(x)) / double(K);
  return x;
}

Vector measured_fw(const Objective& f, const ConstraintSet& C, int K) {
  if (K < 1) throw ConfigError("measured_fw: K must be >= 1");
  const Vector u = C.upperBound();  // throws for non-downward-closed families
  Vector x = Vector::Zero(C.dim());
  for (int k = 0; k < K; ++k) {
    Vector slack = u - x;
    Vector v = linear_maximize(C, f.grad(x).cwiseProduct(slack));
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (u[i] > 0.0) x[i] += v[i] * slack[i] / (u[i] * double(K));
  }
  return x;
}

}  // namespace drboost
