#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "drboost/boosting.hpp"
#include "drboost/geometry.hpp"
#include "drboost/objectives.hpp"
#include "drboost/types.hpp"

namespace drboost {

enum class AscentOption { I, II };
enum class StepSchedule { Theorem, Constant, Custom };

struct OfflineConfig {
  int T = 100;
  AscentOption option = AscentOption::I;
  int batch = 1;  // gradient samples averaged per step
  StepSchedule stepSchedule = StepSchedule::Theorem;
  double eta = 0.0;                                  // for Constant
  std::function<double(int)> customStep;             // for Custom, 1-based t
  uint64_t seed = 0;
  std::optional<Vector> start;  // default: projection of the origin
};

struct RunTrace {
  std::vector<Vector> iterates;    // x_1 .. x_T
  std::vector<double> values;      // f at the reported point of each iterate
  std::vector<double> stepSizes;   // eta_1 .. eta_{T-1}
  int selectedIndex = 0;           // l, 0-based into iterates, drawn uniformly from [0, T-2]
  Vector output;                   // x_l, or (x_l + xUnder)/2 under Option II
  double outputValue = 0.0;
  double wallClockSeconds = 0.0;
};

// Projected ascent on the auxiliary (boosted) function using one-sample
// gradient estimates. Option I targets monotone objectives and reports
// iterates directly; Option II targets non-monotone objectives and reports
// the midpoint toward the min-infinity-norm point.
RunTrace boosting_gradient_ascent(const Objective& f, const ConstraintSet& C,
                                  const OfflineConfig& cfg);

// Same loop with plain (unboosted) averaged noisy gradients.
RunTrace sga_baseline(const Objective& f, const ConstraintSet& C, const OfflineConfig& cfg);

// Linear maximization over the supported constraint families
// (box / cardinality / packing).
Vector linear_maximize(const ConstraintSet& C, const Vector& direction);

// Frank-Wolfe continuous greedy: K steps of (1/K)-weighted linear
// maximizers of the exact gradient, starting from the origin.
Vector continuous_greedy_fw(const Objective& f, const ConstraintSet& C, int K);

// Measured Frank-Wolfe for non-monotone objectives on downward-closed sets.
Vector measured_fw(const Objective& f, const ConstraintSet& C, int K);

}  // namespace drboost
