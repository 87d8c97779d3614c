#pragma once

#include <optional>
#include <vector>

#include "drboost/boosting.hpp"
#include "drboost/geometry.hpp"
#include "drboost/online.hpp"
#include "drboost/types.hpp"

namespace drboost {

struct BanditConfig {
  int T = 1000;
  double lambda = 0.0;  // exploration probability; 0 selects the theorem default
  double delta = 0.0;   // smoothing radius; 0 selects the theorem default
  double eta = 0.0;     // learning rate; 0 selects the theorem default
  AscentOption option = AscentOption::I;
  double gamma = 1.0;   // weak diminishing-returns parameter (Option I)
  uint64_t seed = 0;
  std::optional<InnerBall> innerBall;  // (y, R); defaults to the constraint's ball
  std::optional<double> valueBound;    // M with |f_t| <= M; estimated when absent
};

// Fills lambda/delta/eta with d^{1/3} T^{-1/5}, d^{1/3} T^{-1/5} and
// d^{-1/3} T^{-4/5}, clamping lambda <= 0.5 and delta <= R/2 (small-horizon
// formulas are otherwise degenerate).
BanditConfig resolve_bandit_defaults(BanditConfig cfg, Eigen::Index d, double R);

struct BanditRoundRecord {
  int t = 0;  // 1-based
  bool explore = false;
  Vector played;
  double z = 0.0;      // mixing coefficient (explore only)
  Vector direction;    // unit probe direction (explore only)
  double reward = 0.0;
  Vector estimate;     // zero vector on exploit rounds
  bool feasible = true;
};

struct BanditTrace {
  std::vector<BanditRoundRecord> rounds;
  std::vector<double> rewards;
  int feasibilityViolations = 0;
  int exploreCount = 0;
  double wallClockSeconds = 0.0;
};

// Zeroth-order (value-feedback-only) ascent. Iterates live in the
// similarity-shrunken copy of C about the inner-ball center, so every
// probe point x_t stays feasible in C.
BanditTrace bbga_run(const OnlineEnv& env, const ConstraintSet& C, const BanditConfig& cfg);

// Monte Carlo average of f over the radius-delta ball around x.
double smoothed_value_oracle(const Objective& f, const Vector& x, double delta, int mc, Rng& rng);

struct FkmReport {
  Vector estimatorMean;     // mean of (d/delta) f(x + delta v) v over sphere draws
  Vector quadratureGrad;    // gradient of the delta-smoothed function (disk quadrature)
  Vector standardErrors;
  Vector zScores;
};

// Dual-path check of the one-point gradient estimator against dense disk
// quadrature; dimension must be 2.
FkmReport fkm_estimator_check(const Objective& f, const Vector& x, double delta, int samples,
                              Rng& rng);

}  // namespace drboost
