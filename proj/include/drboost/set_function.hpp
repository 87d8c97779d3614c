#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "drboost/objectives.hpp"
#include "drboost/types.hpp"

namespace drboost {

// Submodular set-function oracle over a ground set of size <= 63,
// addressed by bitmask.
class SetFunction {
 public:
  SetFunction(int groundSize, bool monotone, bool submodular)
      : groundSize_(groundSize), monotone_(monotone), submodular_(submodular) {
    if (groundSize < 1 || groundSize > 63) throw ConfigError("SetFunction: ground size out of range");
  }
  virtual ~SetFunction() = default;

  virtual double eval(uint64_t mask) const = 0;

  int groundSize() const { return groundSize_; }
  bool monotone() const { return monotone_; }
  bool submodular() const { return submodular_; }
  uint64_t fullMask() const { return (groundSize_ >= 64) ? ~0ull : ((1ull << groundSize_) - 1); }

 private:
  int groundSize_;
  bool monotone_, submodular_;
};

// f(S) = mean over users of max_{m in S} ratings(u, m); f(empty) = 0.
class FacilityLocationSetFunction final : public SetFunction {
 public:
  explicit FacilityLocationSetFunction(Matrix ratings);
  double eval(uint64_t mask) const override;
  const Matrix& ratings() const { return ratings_; }

 private:
  Matrix ratings_;
};

// g(S) = base(S) + lambda * (k - |S|).
class RegularizedSetFunction final : public SetFunction {
 public:
  RegularizedSetFunction(std::shared_ptr<const SetFunction> base, double lambda, double k);
  double eval(uint64_t mask) const override;
  const SetFunction& baseFn() const { return *base_; }
  double lambda() const { return lambda_; }
  double k() const { return k_; }

 private:
  std::shared_ptr<const SetFunction> base_;
  double lambda_, k_;
};

// f(S) = sum of weights over S.
class ModularSetFunction final : public SetFunction {
 public:
  explicit ModularSetFunction(Vector weights);
  double eval(uint64_t mask) const override;

 private:
  Vector weights_;
};

// Dense table of values over all 2^n subsets (n <= 20).
class TableSetFunction final : public SetFunction {
 public:
  TableSetFunction(int groundSize, std::vector<double> table, bool monotone, bool submodular);
  double eval(uint64_t mask) const override;

 private:
  std::vector<double> table_;
};

std::shared_ptr<SetFunction> facility_location_setfn(Matrix ratings);
std::shared_ptr<SetFunction> regularized_setfn(std::shared_ptr<const SetFunction> base,
                                               double lambda, double k);

// Exact multilinear extension (full 2^n enumeration, n <= 20).
double multilinear_value_exact(const SetFunction& f, const Vector& x);
Vector multilinear_grad_exact(const SetFunction& f, const Vector& x);

// One i.i.d. inclusion sample S ~ x per batch element; the i-th entry of
// each sample is f(S with i) - f(S without i). Unbiased for the exact
// gradient.
Vector multilinear_grad_sampled(const SetFunction& f, const Vector& x, int batch, Rng& rng);
uint64_t sample_inclusion_mask(const Vector& x, Rng& rng);

// Objective adapter around the exact multilinear extension (n <= 20).
class MultilinearObjective final : public Objective {
 public:
  MultilinearObjective(std::shared_ptr<const SetFunction> base, int sampleBatch = 0);

  Eigen::Index dim() const override { return base_->groundSize(); }
  double value(const Vector& x) const override { return multilinear_value_exact(*base_, x); }
  Vector grad(const Vector& x) const override { return multilinear_grad_exact(*base_, x); }
  Vector noisyGrad(const Vector& x, Rng& rng) const override;
  double smoothness() const override;
  double lipschitz() const override;
  bool monotone() const override { return base_->monotone(); }

  const SetFunction& baseFn() const { return *base_; }

 private:
  std::shared_ptr<const SetFunction> base_;
  int sampleBatch_;  // 0: exact gradient plus Gaussian noise; >0: set-sampled gradient
  double maxAbs_;
};

// Synthetic ratings matrix, entries i.i.d. uniform on [0, 5], optionally
// rounded to half stars.
Matrix synthetic_ratings(Eigen::Index users, Eigen::Index movies, Rng& rng,
                         bool halfStarRounding = false);

// CSV with header `user,movie,rating` (0-based indices); missing pairs are 0.
Matrix load_ratings_csv(const std::string& path);

}  // namespace drboost
