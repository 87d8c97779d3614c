#pragma once

#include <functional>
#include <vector>

#include "drboost/geometry.hpp"
#include "drboost/offline.hpp"
#include "drboost/set_function.hpp"
#include "drboost/types.hpp"

namespace drboost {

// Saddle objective f(x, S): convex (declared) in the continuous variable x,
// submodular (declared) in the set S.
class ConvexSubmodularObjective {
 public:
  virtual ~ConvexSubmodularObjective() = default;

  virtual Eigen::Index xDim() const = 0;
  virtual int groundSize() const = 0;
  virtual double eval(const Vector& x, uint64_t mask) const = 0;
  virtual Vector gradX(const Vector& x, uint64_t mask) const = 0;
  virtual bool monotoneInS() const = 0;
};

struct MinimaxConfig {
  int T = 1000;
  double eta = 0.0;  // 0 selects sqrt(diam^2 C + diam^2 K) / (G * sqrt(T))
  AscentOption option = AscentOption::I;
  uint64_t seed = 0;
  int sampleBatch = 1;  // set samples averaged per stochastic gradient
};

struct MinimaxResult {
  Vector xSol;                   // arithmetic mean of the x iterates
  std::vector<Vector> xIterates;
  std::vector<Vector> yIterates;
  double wallClockSeconds = 0.0;
};

// Alternating projected descent (in x) / boosted ascent (in y) on the
// multilinear extension over a cardinality matroid hull with y-lower
// point 0. Option I requires monotonicity in S.
MinimaxResult boosting_gda(const ConvexSubmodularObjective& obj, const ConstraintSet& K,
                           const CardinalityPolytope& M, const MinimaxConfig& cfg);

using MaskFn = std::function<double(uint64_t)>;

struct SetChoice {
  uint64_t mask = 0;
  double value = 0.0;
};

// k-step marginal-gain greedy, lowest-index tie-breaking.
SetChoice greedy_max_set(const MaskFn& fn, int groundSize, int k);

// Distorted greedy for fn(S) = submodular(S) + sum of modular[e] over S
// (+ any constant, supplied through fn for the reported value).
SetChoice distorted_greedy(const MaskFn& submodularPart, const Vector& modular, const MaskFn& fn,
                           int groundSize, int k);

enum class MaxSetMode { Greedy, Distorted, Enumerate };

// max over |S| <= k of obj.eval(x, S) via the selected oracle; enumeration
// is exact for ground sets up to 16.
double minimax_eval(const ConvexSubmodularObjective& obj, const Vector& x, int k,
                    MaxSetMode mode);

// Desk-scale facility saddle instance: blocks x_1..x_n in R^m with
// 0.1 <= ||x_i|| <= 1,
//   f(x, S) = sum_i max_{j in S} w_ij x_i . x_j + lambda / sum_i ||x_i||^2,
// optionally regularized by + (k - |S|) for the non-monotone variant.
class ConvexFacilityObjective final : public ConvexSubmodularObjective {
 public:
  ConvexFacilityObjective(int blockDim, int groundSize, int k, Matrix weights, double lambda,
                          bool regularized);

  Eigen::Index xDim() const override { return Eigen::Index(blockDim_) * groundSize_; }
  int groundSize() const override { return groundSize_; }
  double eval(const Vector& x, uint64_t mask) const override;
  Vector gradX(const Vector& x, uint64_t mask) const override;
  bool monotoneInS() const override { return !regularized_; }

  int k() const { return k_; }
  int blockDim() const { return blockDim_; }
  double lambda() const { return lambda_; }

 private:
  int blockDim_, groundSize_, k_;
  Matrix weights_;
  double lambda_;
  bool regularized_;
};

ConvexFacilityObjective make_convex_facility(int blockDim, int groundSize, int k, double lambda,
                                             bool regularized, Rng& rng);

}  // namespace drboost
