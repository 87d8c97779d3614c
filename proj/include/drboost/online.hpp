#pragma once

#include <memory>
#include <vector>

#include "drboost/boosting.hpp"
#include "drboost/geometry.hpp"
#include "drboost/objectives.hpp"
#include "drboost/offline.hpp"
#include "drboost/types.hpp"

namespace drboost {

// Sequence of per-round objectives with an adversarial delay schedule.
// Feedback queried at round s arrives at the end of round s + d_s - 1;
// arrivals past the horizon are dropped from updates, but the total
// delay D = sum d_s still counts them.
struct OnlineEnv {
  std::vector<std::shared_ptr<const Objective>> objectives;
  std::vector<int> delays;

  int horizon() const { return int(objectives.size()); }
  void validate() const;
  long long totalDelay() const;
};

struct OnlineTrace {
  std::vector<Vector> played;    // point evaluated by the adversary each round
  std::vector<double> rewards;   // f_t at the played point
  std::vector<int> feedbackCounts;  // |F_t| per round
  int dropped = 0;               // feedback lost past the horizon
  double wallClockSeconds = 0.0;
};

// Online projected ascent on the auxiliary function under delayed
// one-sample feedback. Option I plays the iterate; Option II plays the
// midpoint toward the min-infinity-norm point.
OnlineTrace obga_run(const OnlineEnv& env, const ConstraintSet& C, AscentOption option,
                     double eta, uint64_t seed, int batch = 1);

// Identical loop with raw noisy gradients of f_t at x_t; always plays x_t.
OnlineTrace oga_baseline(const OnlineEnv& env, const ConstraintSet& C, double eta, uint64_t seed,
                         int batch = 1);

std::vector<int> delay_uniform(int T, int lo, int hi, uint64_t seed);
std::vector<int> delay_constant(int T, int d);

struct RegretPoint {
  int t = 0;          // 1-based round
  double reward = 0.0;
  double cumulativeReward = 0.0;
  double regret = 0.0;  // alpha * cumulative comparator - cumulative reward
  double ratio = 0.0;   // regret / t
};

// Regret bookkeeping against per-round comparator values (usually a fixed
// point's value under each f_t).
std::vector<RegretPoint> regret_series(const std::vector<double>& rewards,
                                       const std::vector<double>& comparatorValues, double alpha);

// Max norm over `probes` noisy gradients of random feasible points across
// the sequence, scaled by `coefficient` (the boosting weight mass); used
// for the theorem step size eta = diam(C) / (G * sqrt(D)).
double estimate_gradient_bound(const OnlineEnv& env, const ConstraintSet& C, double coefficient,
                               uint64_t seed, int probes = 100);

}  // namespace drboost
