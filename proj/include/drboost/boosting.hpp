#pragma once

#include <functional>
#include <memory>

#include "drboost/geometry.hpp"
#include "drboost/objectives.hpp"
#include "drboost/set_function.hpp"
#include "drboost/types.hpp"

namespace drboost {

enum class BoostMode { Monotone, NonMonotone };

// Parameters of the auxiliary (reweighted) function whose gradient the
// one-sample estimators target. Monotone mode mixes along the ray z*x with
// weight e^{gamma (z-1)}; non-monotone mode mixes along the segment from
// the min-infinity-norm point with weight 1/(8 (1 - z/2)^3).
struct BoostSpec {
  BoostMode mode = BoostMode::Monotone;
  double gamma = 1.0;   // weak diminishing-returns parameter, monotone mode
  Vector xUnder;        // anchor point, non-monotone mode

  static BoostSpec monotoneSpec(double gamma);
  static BoostSpec nonMonotoneSpec(Vector xUnder);

  // Total weight mass: (1 - e^{-gamma}) / gamma or 3/8.
  double coefficient() const;
  Vector probePoint(const Vector& x, double z) const;
};

struct BoostedGradientSample {
  double z = 0.0;
  Vector estimate;
  Vector probePoint;
};

// Inverse-CDF samplers for the mixing coefficient.
double sample_z_up(double gamma, double u);
double sample_z_tilde(double u);
double draw_z(const BoostSpec& spec, Rng& rng);

// One-sample estimate of the auxiliary gradient: coefficient * noisyGrad
// at the probe point.
BoostedGradientSample boosted_grad(const BoostSpec& spec, const Objective& f, const Vector& x,
                                   Rng& rng);

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendreRule {
  Vector nodes, weights;
};
GaussLegendreRule gauss_legendre(int n);

// Composite quadrature of a scalar function on [0, 1].
double integrate01(const std::function<double(double)>& fn, int panels = 32, int nodes = 16);

// Deterministic quadrature of the auxiliary gradient (verification oracle).
Vector nonoblivious_grad_quadrature(const BoostSpec& spec, const Objective& f, const Vector& x);

// Deterministic quadrature of the auxiliary value. Monotone mode requires
// f(0) = 0; the removable z -> 0 endpoint uses the analytic limit.
double nonoblivious_value_quadrature(const BoostSpec& spec, const Objective& f, const Vector& x);

struct BoostingConstants {
  double smoothness = 0.0;   // gradient Lipschitz constant of the auxiliary function
  double lipschitz = 0.0;    // value Lipschitz constant
  double sigmaSq = 0.0;      // one-sample estimator variance bound (monotone mode)
  double thetaOpt = 0.0;     // 1 / (1 - e^{-gamma}) (monotone mode)
};

BoostingConstants boosting_constants(double gamma, double L, double L1, double sigma, double rX);
BoostingConstants boosting_constants_nonmonotone(double L, double L1);

struct InequalityReport {
  int trials = 0;
  int violations = 0;
  double worstMargin = 0.0;  // most negative slack observed
};

// Sweeps random (x, y) pairs in C checking the first-order lower bounds
// that make stationary points of the auxiliary function certify the
// approximation ratio.
InequalityReport check_corollary_inequalities(const Objective& f, const ConstraintSet& C,
                                              int trials, Rng& rng, double tol = 1e-5);

// Discrete counterpart of the auxiliary function: a set function whose
// multilinear extension (scaled by (e-1)/e in monotone mode) matches the
// auxiliary function of the multilinear extension of `base`. Verification
// oracle only; cost grows as 3^|V|, so |V| <= 12.
std::shared_ptr<SetFunction> boosted_set_function(const SetFunction& base, BoostMode mode);

// Mixing coefficient m_{a,b} used by boosted_set_function (exposed for tests).
double boost_mix_coefficient(int a, int b, BoostMode mode);

}  // namespace drboost
