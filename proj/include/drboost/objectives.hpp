#pragma once

#include <memory>

#include "drboost/types.hpp"

namespace drboost {

// Contract for a (weakly) DR-submodular objective on a box domain.
// `noisyGrad` adds iid Gaussian noise of scale `noiseScale` per coordinate
// to the exact gradient; concrete families may override it.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual Eigen::Index dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector grad(const Vector& x) const = 0;

  virtual Vector noisyGrad(const Vector& x, Rng& rng) const;

  virtual double smoothness() const = 0;  // L: gradient Lipschitz constant (upper bound)
  virtual double lipschitz() const = 0;   // L1: value Lipschitz constant (upper bound)
  virtual double weakDr() const { return 1.0; }
  virtual bool monotone() const = 0;
  virtual bool shiftApplied() const { return false; }

  double noiseScale() const { return noiseScale_; }
  void setNoiseScale(double s) { noiseScale_ = s; }

  // Variance bound for one noisy gradient sample: sigma^2 = scale^2 * n.
  double noiseVariance() const { return noiseScale_ * noiseScale_ * double(dim()); }

 private:
  double noiseScale_ = 0.0;
};

// f(x) = 0.5 x'Hx + h'x + c with all entries of H <= 0 (DR-submodular).
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Matrix H, Vector h, double c, Vector upper, bool monotone);

  Eigen::Index dim() const override { return h_.size(); }
  double value(const Vector& x) const override;
  Vector grad(const Vector& x) const override;
  double smoothness() const override { return frob_; }
  double lipschitz() const override { return frob_ * upper_.norm() + h_.norm(); }
  bool monotone() const override { return monotone_; }

  const Matrix& H() const { return H_; }
  const Vector& h() const { return h_; }
  double c() const { return c_; }

 private:
  Matrix H_;
  Vector h_;
  double c_;
  Vector upper_;
  bool monotone_;
  double frob_;
};

// H ~ symmetric U[-1,0], h = -H'u, c = 0: monotone DR-submodular with
// f(0) = 0 and f >= 0 on [0,u].
QuadraticObjective make_monotone_quadratic(Eigen::Index n, Rng& rng);

// H ~ symmetric U[-1,0], h ~ U[0,1]^n, c = n: non-monotone, nonnegative
// on [0,1]^n.
QuadraticObjective make_nonmonotone_quadratic(Eigen::Index n, Rng& rng);

// Monotone coverage special on [0,1]^{2k+1} with a strict local maximum at
// (1,..,1,0,..,0) of value k+1 and maximum value 2k+1.
class CoverageMonotone final : public Objective {
 public:
  explicit CoverageMonotone(int k);

  Eigen::Index dim() const override { return 2 * k_ + 1; }
  double value(const Vector& x) const override;
  Vector grad(const Vector& x) const override;
  double smoothness() const override;
  double lipschitz() const override;
  bool monotone() const override { return true; }

  int k() const { return k_; }
  Vector localMaxPoint() const;  // (1 x k, 0 x (k+1))
  Vector globalMaxPoint() const;  // (0 x k, 1 x (k+1))

 private:
  int k_;
};

// Non-monotone coverage special on [0,1]^{2k+1} with a stationary point at
// (1,..,1,0) of value 1 and maximum value k.
class CoverageNonMonotone final : public Objective {
 public:
  explicit CoverageNonMonotone(int k);

  Eigen::Index dim() const override { return 2 * k_ + 1; }
  double value(const Vector& x) const override;
  Vector grad(const Vector& x) const override;
  double smoothness() const override;
  double lipschitz() const override;
  bool monotone() const override { return false; }

  int k() const { return k_; }
  Vector stationaryPoint() const;  // (1 x 2k, 0)
  Vector globalMaxPoint() const;   // (0 x 2k, 1)

 private:
  int k_;
};

double fk_value(int k, const Vector& x);
Vector fk_grad(int k, const Vector& x);
double gk_value(int k, const Vector& x);
Vector gk_grad(int k, const Vector& x);

// f - f(0) for monotone objectives whose raw value at 0 is nonzero.
class ShiftedObjective final : public Objective {
 public:
  explicit ShiftedObjective(std::shared_ptr<const Objective> base);

  Eigen::Index dim() const override { return base_->dim(); }
  double value(const Vector& x) const override { return base_->value(x) - shift_; }
  Vector grad(const Vector& x) const override { return base_->grad(x); }
  double smoothness() const override { return base_->smoothness(); }
  double lipschitz() const override { return base_->lipschitz(); }
  double weakDr() const override { return base_->weakDr(); }
  bool monotone() const override { return true; }
  bool shiftApplied() const override { return true; }

 private:
  std::shared_ptr<const Objective> base_;
  double shift_;
};

}  // namespace drboost
