#include "drboost/online.hpp"

#include <chrono>
#include <cmath>

namespace drboost {

void OnlineEnv::validate() const {
  if (objectives.empty()) throw ConfigError("OnlineEnv: empty objective sequence");
  if (delays.size() != objectives.size())
    throw ConfigError("OnlineEnv: delay schedule length differs from horizon");
  for (int d : delays)
    if (d < 1) throw ConfigError("OnlineEnv: delays must be >= 1");
  for (const auto& f : objectives) {
    if (!f) throw ConfigError("OnlineEnv: null objective");
    if (f->dim() != objectives.front()->dim())
      throw ConfigError("OnlineEnv: inconsistent objective dimensions");
  }
}

long long OnlineEnv::totalDelay() const {
  long long d = 0;
  for (int v : delays) d += v;
  return d;
}

namespace {

OnlineTrace delayedAscent(const OnlineEnv& env, const ConstraintSet& C, AscentOption option,
                          double eta, uint64_t seed, int batch, bool boosted) {
  env.validate();
  if (eta <= 0.0) throw ConfigError("online solver: eta must be > 0");
  if (batch < 1) throw ConfigError("online solver: batch must be >= 1");
  if (env.objectives.front()->dim() != C.dim())
    throw ConfigError("online solver: objective/constraint dimension mismatch");

  const auto t0 = std::chrono::steady_clock::now();
  const int T = env.horizon();
  Rng rng(seed);
  const Vector xUnder =
      option == AscentOption::II ? C.minInfNormPoint() : Vector::Zero(C.dim());

  // arrivals[t] = rounds s whose feedback is delivered at the end of round t.
  std::vector<std::vector<int>> arrivals(static_cast<size_t>(T));
  OnlineTrace trace;
  for (int s = 0; s < T; ++s) {
    long long at = (long long)s + env.delays[size_t(s)] - 1;
    if (at < T)
      arrivals[size_t(at)].push_back(s);
    else
      ++trace.dropped;
  }

  std::vector<Vector> stored(static_cast<size_t>(T));
  Vector x = C.project(Vector::Zero(C.dim()));
  for (int t = 0; t < T; ++t) {
    const Objective& f = *env.objectives[size_t(t)];
    if (boosted && option == AscentOption::I && !f.monotone())
      throw ConfigError("online solver: Option I requires monotone objectives");
    Vector play = option == AscentOption::I ? x : Vector(0.5 * (x + xUnder));
    trace.played.push_back(play);
    trace.rewards.push_back(f.value(play));

    Vector est = Vector::Zero(C.dim());
    if (boosted) {
      BoostSpec spec = option == AscentOption::I ? BoostSpec::monotoneSpec(f.weakDr())
                                                 : BoostSpec::nonMonotoneSpec(xUnder);
      for (int b = 0; b < batch; ++b) est += boosted_grad(spec, f, x, rng).estimate;
    } else {
      for (int b = 0; b < batch; ++b) est += f.noisyGrad(x, rng);
    }
    stored[size_t(t)] = est / double(batch);

    trace.feedbackCounts.push_back(int(arrivals[size_t(t)].size()));
    Vector y = x;
    for (int s : arrivals[size_t(t)]) y += eta * stored[size_t(s)];
    x = C.project(y);
  }
  trace.wallClockSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return trace;
}

}  // namespace

OnlineTrace obga_run(const OnlineEnv& env, const ConstraintSet& C, AscentOption option,
                     double eta, uint64_t seed, int batch) {
  return delayedAscent(env, C, option, eta, seed, batch, true);
}

OnlineTrace oga_baseline(const OnlineEnv& env, const ConstraintSet& C, double eta, uint64_t seed,
                         int batch) {
  return delayedAscent(env, C, AscentOption::I, eta, seed, batch, false);
}

std::vector<int> delay_uniform(int T, int lo, int hi, uint64_t seed) {
  if (T < 1 || lo < 1 || hi < lo) throw ConfigError("delay_uniform: bad parameters");
  Rng rng(seed);
  std::uniform_int_distribution<int> pick(lo, hi);
  std::vector<int> d(static_cast<size_t>(T));
  for (auto& v : d) v = pick(rng);
  return d;
}

std::vector<int> delay_constant(int T, int d) {
  if (T < 1 || d < 1) throw ConfigError("delay_constant: bad parameters");
  return std::vector<int>(size_t(T), d);
}

std::vector<RegretPoint> regret_series(const std::vector<double>& rewards,
                                       const std::vector<double>& comparatorValues,
                                       double alpha) {
  if (rewards.size() != comparatorValues.size())
    throw ConfigError("regret_series: length mismatch");
  std::vector<RegretPoint> out;
  out.reserve(rewards.size());
  double cumReward = 0.0, cumComparator = 0.0;
  for (size_t i = 0; i < rewards.size(); ++i) {
    cumReward += rewards[i];
    cumComparator += comparatorValues[i];
    RegretPoint p;
    p.t = int(i) + 1;
    p.reward = rewards[i];
    p.cumulativeReward = cumReward;
    p.regret = alpha * cumComparator - cumReward;
    p.ratio = p.regret / double(p.t);
    out.push_back(p);
  }
  return out;
}

double estimate_gradient_bound(const OnlineEnv& env, const ConstraintSet& C, double coefficient,
                               uint64_t seed, int probes) {
  env.validate();
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double best = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Objective& f = *env.objectives[size_t(p) % env.objectives.size()];
    Vector x(C.dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = (2.0 * unif(rng) - 1.0) * C.radius();
    x = C.project(x);
    best = std::max(best, f.noisyGrad(x, rng).norm());
  }
  return std::max(coefficient * best, 1e-12);
}

}  // namespace drboost
