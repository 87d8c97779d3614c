#include "drboost/minimax.hpp"

#include <bit>
#include <chrono>
#include <cmath>

#include "drboost/boosting.hpp"

namespace drboost {

namespace {

// Marginal-difference stochastic gradient of the multilinear extension
// of S -> obj.eval(x, S) at inclusion probabilities y.
Vector sampledMultilinearGradY(const ConvexSubmodularObjective& obj, const Vector& x,
                               const Vector& y, int batch, Rng& rng) {
  const int n = obj.groundSize();
  Vector g = Vector::Zero(n);
  for (int b = 0; b < batch; ++b) {
    uint64_t mask = sample_inclusion_mask(y, rng);
    for (int i = 0; i < n; ++i) {
      const uint64_t bit = 1ull << i;
      g[i] += obj.eval(x, mask | bit) - obj.eval(x, mask & ~bit);
    }
  }
  return g / double(batch);
}

Vector sampledGradX(const ConvexSubmodularObjective& obj, const Vector& x, const Vector& y,
                    int batch, Rng& rng) {
  Vector g = Vector::Zero(obj.xDim());
  for (int b = 0; b < batch; ++b) g += obj.gradX(x, sample_inclusion_mask(y, rng));
  return g / double(batch);
}

double estimateGradBound(const ConvexSubmodularObjective& obj, const ConstraintSet& K,
                         const CardinalityPolytope& M, uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double best = 1e-12;
  for (int p = 0; p < 100; ++p) {
    Vector x(K.dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = (2.0 * unif(rng) - 1.0) * K.radius();
    x = K.project(x);
    Vector y(M.dim());
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = unif(rng) * M.upper()[i];
    y = M.project(y);
    uint64_t mask = sample_inclusion_mask(y, rng);
    best = std::max(best, obj.gradX(x, mask).norm());
    Vector gy(M.dim());
    for (int i = 0; i < obj.groundSize(); ++i) {
      const uint64_t bit = 1ull << i;
      gy[i] = obj.eval(x, mask | bit) - obj.eval(x, mask & ~bit);
    }
    best = std::max(best, gy.norm());
  }
  return best;
}

}  // namespace

MinimaxResult boosting_gda(const ConvexSubmodularObjective& obj, const ConstraintSet& K,
                           const CardinalityPolytope& M, const MinimaxConfig& cfg) {
  if (cfg.T < 1) throw ConfigError("boosting_gda: T must be >= 1");
  if (cfg.sampleBatch < 1) throw ConfigError("boosting_gda: sampleBatch must be >= 1");
  if (obj.xDim() != K.dim() || obj.groundSize() != int(M.dim()))
    throw ConfigError("boosting_gda: dimension mismatch");
  if (cfg.option == AscentOption::I && !obj.monotoneInS())
    throw ConfigError("boosting_gda: Option I requires monotonicity in S");

  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);
  double eta = cfg.eta;
  if (eta <= 0.0) {
    const double G = estimateGradBound(obj, K, M, cfg.seed ^ 0x9e3779b97f4a7c15ull);
    eta = std::sqrt(K.diameter() * K.diameter() + M.diameter() * M.diameter()) /
          (G * std::sqrt(double(cfg.T)));
  }

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  MinimaxResult result;
  Vector x = K.project(Vector::Zero(K.dim()));
  Vector y = Vector::Zero(M.dim());
  Vector xSum = Vector::Zero(K.dim());
  for (int t = 0; t < cfg.T; ++t) {
    result.xIterates.push_back(x);
    result.yIterates.push_back(y);
    xSum += x;
    if (cfg.option == AscentOption::I) {
      Vector gx = sampledGradX(obj, x, y, cfg.sampleBatch, rng);
      Vector xNext = K.project(x - eta * gx);
      const double z = sample_z_up(1.0, unif(rng));
      Vector gy = sampledMultilinearGradY(obj, x, Vector(z * y), cfg.sampleBatch, rng);
      y = M.project(y + eta * (1.0 - std::exp(-1.0)) * gy);
      x = xNext;
    } else {
      Vector gx = sampledGradX(obj, x, Vector(0.5 * y), cfg.sampleBatch, rng);
      Vector xNext = K.project(x - eta * gx);
      const double z = sample_z_tilde(unif(rng));
      Vector gy = sampledMultilinearGradY(obj, x, Vector((z / 2.0) * y), cfg.sampleBatch, rng);
      y = M.project(y + (3.0 * eta / 8.0) * gy);
      x = xNext;
    }
  }
  result.xSol = xSum / double(cfg.T);
  result.wallClockSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

// ----------------------------------------------------- Set oracles

SetChoice greedy_max_set(const MaskFn& fn, int groundSize, int k) {
  if (groundSize < 1 || groundSize > 63 || k < 0 || k > groundSize)
    throw ConfigError("greedy_max_set: bad parameters");
  SetChoice out;
  out.value = fn(0);
  for (int step = 0; step < k; ++step) {
    int bestIdx = -1;
    double bestVal = -std::numeric_limits<double>::infinity();
    for (int e = 0; e < groundSize; ++e) {
      const uint64_t bit = 1ull << e;
      if (out.mask & bit) continue;
      const double v = fn(out.mask | bit);
      if (v > bestVal) {
        bestVal = v;
        bestIdx = e;
      }
    }
    if (bestIdx < 0) break;
    out.mask |= 1ull << bestIdx;
    out.value = bestVal;
  }
  return out;
}

SetChoice distorted_greedy(const MaskFn& submodularPart, const Vector& modular, const MaskFn& fn,
                           int groundSize, int k) {
  if (groundSize < 1 || groundSize > 63 || k < 1 || k > groundSize)
    throw ConfigError("distorted_greedy: bad parameters");
  if (modular.size() != groundSize) throw ConfigError("distorted_greedy: modular size mismatch");
  uint64_t S = 0;
  for (int i = 0; i < k; ++i) {
    const double distortion = std::pow(1.0 - 1.0 / double(k), k - (i + 1));
    int bestIdx = -1;
    double bestGain = 0.0;  // only strictly positive distorted gains are taken
    for (int e = 0; e < groundSize; ++e) {
      const uint64_t bit = 1ull << e;
      if (S & bit) continue;
      const double gain =
          distortion * (submodularPart(S | bit) - submodularPart(S)) + modular[e];
      if (gain > bestGain) {
        bestGain = gain;
        bestIdx = e;
      }
    }
    if (bestIdx >= 0) S |= 1ull << bestIdx;
  }
  return SetChoice{S, fn(S)};
}

double minimax_eval(const ConvexSubmodularObjective& obj, const Vector& x, int k,
                    MaxSetMode mode) {
  const int n = obj.groundSize();
  MaskFn fn = [&](uint64_t mask) { return obj.eval(x, mask); };
  switch (mode) {
    case MaxSetMode::Greedy:
      return greedy_max_set(fn, n, k).value;
    case MaxSetMode::Distorted: {
      // Decomposition for the regularized family: monotone part plus a
      // unit penalty per selected element.
      MaskFn mono = [&](uint64_t mask) {
        return obj.eval(x, mask) + double(std::popcount(mask));
      };
      return distorted_greedy(mono, Vector::Constant(n, -1.0), fn, n, k).value;
    }
    case MaxSetMode::Enumerate: {
      if (n > 16) throw ConfigError("minimax_eval: enumeration capped at ground size 16");
      double best = -std::numeric_limits<double>::infinity();
      for (uint64_t mask = 0; mask < (1ull << n); ++mask)
        if (std::popcount(mask) <= k) best = std::max(best, fn(mask));
      return best;
    }
  }
  throw ConfigError("minimax_eval: unknown mode");
}

// --------------------------------------------------- Facility saddle

ConvexFacilityObjective::ConvexFacilityObjective(int blockDim, int groundSize, int k,
                                                 Matrix weights, double lambda, bool regularized)
    : blockDim_(blockDim),
      groundSize_(groundSize),
      k_(k),
      weights_(std::move(weights)),
      lambda_(lambda),
      regularized_(regularized) {
  if (blockDim < 1 || groundSize < 1 || groundSize > 16 || k < 1 || k > groundSize)
    throw ConfigError("ConvexFacilityObjective: bad shape");
  if (weights_.rows() != groundSize || weights_.cols() != groundSize)
    throw ConfigError("ConvexFacilityObjective: weight matrix shape mismatch");
  if ((weights_.array() < 0.0).any())
    throw ConfigError("ConvexFacilityObjective: weights must be nonnegative");
  if (lambda < 0.0) throw ConfigError("ConvexFacilityObjective: lambda must be >= 0");
}

double ConvexFacilityObjective::eval(const Vector& x, uint64_t mask) const {
  requireDim(x, xDim(), "ConvexFacilityObjective::eval");
  double total = 0.0, sqNorm = 0.0;
  for (int i = 0; i < groundSize_; ++i) {
    auto xi = x.segment(Eigen::Index(i) * blockDim_, blockDim_);
    sqNorm += xi.squaredNorm();
    double best = 0.0;
    bool any = false;
    for (int j = 0; j < groundSize_; ++j) {
      if (!(mask & (1ull << j))) continue;
      auto xj = x.segment(Eigen::Index(j) * blockDim_, blockDim_);
      const double v = weights_(i, j) * xi.dot(xj);
      if (!any || v > best) best = v;
      any = true;
    }
    if (any) total += best;
  }
  if (lambda_ > 0.0) total += lambda_ / std::max(sqNorm, 1e-12);
  if (regularized_) total += double(k_) - double(std::popcount(mask));
  return total;
}

Vector ConvexFacilityObjective::gradX(const Vector& x, uint64_t mask) const {
  requireDim(x, xDim(), "ConvexFacilityObjective::gradX");
  Vector g = Vector::Zero(xDim());
  double sqNorm = x.squaredNorm();
  for (int i = 0; i < groundSize_; ++i) {
    auto xi = x.segment(Eigen::Index(i) * blockDim_, blockDim_);
    int argmax = -1;
    double best = 0.0;
    for (int j = 0; j < groundSize_; ++j) {
      if (!(mask & (1ull << j))) continue;
      auto xj = x.segment(Eigen::Index(j) * blockDim_, blockDim_);
      const double v = weights_(i, j) * xi.dot(xj);
      if (argmax < 0 || v > best) {
        best = v;
        argmax = j;
      }
    }
    if (argmax >= 0) {
      auto xj = x.segment(Eigen::Index(argmax) * blockDim_, blockDim_);
      g.segment(Eigen::Index(i) * blockDim_, blockDim_) += weights_(i, argmax) * xj;
      g.segment(Eigen::Index(argmax) * blockDim_, blockDim_) += weights_(i, argmax) * xi;
    }
  }
  if (lambda_ > 0.0) {
    const double denom = std::max(sqNorm, 1e-12);
    g -= (2.0 * lambda_ / (denom * denom)) * x;
  }
  return g;
}

ConvexFacilityObjective make_convex_facility(int blockDim, int groundSize, int k, double lambda,
                                             bool regularized, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix w(groundSize, groundSize);
  for (int i = 0; i < groundSize; ++i)
    for (int j = 0; j < groundSize; ++j) w(i, j) = unif(rng);
  return ConvexFacilityObjective(blockDim, groundSize, k, std::move(w), lambda, regularized);
}

}  // namespace drboost
