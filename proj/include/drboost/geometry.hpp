#pragma once

#include <memory>
#include <optional>

#include "drboost/types.hpp"

namespace drboost {

struct InnerBall {
  Vector center;
  double radius = 0.0;
};

// Abstract convex feasible region. Projections are Euclidean; `diameter`
// and `radius` may be tight values or safe upper bounds (they only feed
// step-size formulas).
class ConstraintSet {
 public:
  virtual ~ConstraintSet() = default;

  virtual Eigen::Index dim() const = 0;
  virtual Vector project(const Vector& x) const = 0;
  virtual bool contains(const Vector& x, double tol = kFeasTol) const = 0;
  virtual double diameter() const = 0;
  virtual double radius() const = 0;

  // Feasible point of minimum infinity norm. Default: 0 when feasible,
  // else an explicitly stored point; otherwise an error.
  virtual Vector minInfNormPoint() const;

  virtual std::optional<InnerBall> innerBall() const { return innerBall_; }

  void setMinInfNormPoint(Vector p) { explicitMinInf_ = std::move(p); }
  void setInnerBall(InnerBall b) { innerBall_ = std::move(b); }

  // Componentwise upper bound of the set when it is downward closed
  // (box / cardinality / packing); used by measured Frank-Wolfe.
  virtual Vector upperBound() const {
    throw ConfigError("constraint family has no componentwise upper bound");
  }

 protected:
  std::optional<Vector> explicitMinInf_;
  std::optional<InnerBall> innerBall_;
};

class BoxConstraint final : public ConstraintSet {
 public:
  BoxConstraint(Vector lower, Vector upper);
  explicit BoxConstraint(Eigen::Index n) : BoxConstraint(Vector::Zero(n), Vector::Ones(n)) {}

  Eigen::Index dim() const override { return lower_.size(); }
  Vector project(const Vector& x) const override;
  bool contains(const Vector& x, double tol = kFeasTol) const override;
  double diameter() const override { return (upper_ - lower_).norm(); }
  double radius() const override { return lower_.cwiseAbs().cwiseMax(upper_.cwiseAbs()).norm(); }
  Vector minInfNormPoint() const override;
  std::optional<InnerBall> innerBall() const override;
  Vector upperBound() const override { return upper_; }

  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

 private:
  Vector lower_, upper_;
};

// {x : 0 <= x <= upper, sum(x) <= budget}
class CardinalityPolytope final : public ConstraintSet {
 public:
  CardinalityPolytope(Eigen::Index n, double budget, Vector upper);
  CardinalityPolytope(Eigen::Index n, double budget)
      : CardinalityPolytope(n, budget, Vector::Ones(n)) {}

  Eigen::Index dim() const override { return upper_.size(); }
  Vector project(const Vector& x) const override;
  bool contains(const Vector& x, double tol = kFeasTol) const override;
  double diameter() const override;
  double radius() const override;
  Vector minInfNormPoint() const override { return Vector::Zero(dim()); }
  Vector upperBound() const override { return upper_; }

  double budget() const { return budget_; }
  const Vector& upper() const { return upper_; }

 private:
  double budget_;
  Vector upper_;
};

// {x : 0 <= x <= upper, A x <= b} with A, b >= 0. Projection by Dykstra's
// alternating method over the box and each halfspace.
class PackingPolytope final : public ConstraintSet {
 public:
  PackingPolytope(Matrix A, Vector b, Vector upper, double tol = 1e-9, int maxIter = 10000);

  Eigen::Index dim() const override { return upper_.size(); }
  Vector project(const Vector& x) const override;
  bool contains(const Vector& x, double tol = kFeasTol) const override;
  double diameter() const override { return upper_.norm(); }
  double radius() const override { return upper_.norm(); }
  Vector minInfNormPoint() const override { return Vector::Zero(dim()); }
  Vector upperBound() const override { return upper_; }

  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  const Vector& upper() const { return upper_; }

 private:
  Matrix A_;
  Vector b_;
  Vector upper_;
  double tol_;
  int maxIter_;
};

// Similarity-shrunken copy of a base set about an interior pole y:
// { y + (1+deltaPrime)^{-1} (c - y) : c in base }.
class MinkowskiSet final : public ConstraintSet {
 public:
  MinkowskiSet(std::shared_ptr<const ConstraintSet> base, Vector pole, double deltaPrime);

  Eigen::Index dim() const override { return pole_.size(); }
  Vector project(const Vector& x) const override;
  bool contains(const Vector& x, double tol = kFeasTol) const override;
  double diameter() const override { return base_->diameter() / (1.0 + deltaPrime_); }
  double radius() const override;
  Vector minInfNormPoint() const override;

  double deltaPrime() const { return deltaPrime_; }
  const Vector& pole() const { return pole_; }
  const ConstraintSet& base() const { return *base_; }

 private:
  std::shared_ptr<const ConstraintSet> base_;
  Vector pole_;
  double deltaPrime_;
};

// Block constraint for block vectors (x_1..x_nBlocks), each block of size
// blockDim with innerRadius <= ||x_i|| <= outerRadius. Projection is radial
// per block (exact for the outer ball; nearest-point for the inner shell).
class RingBlockConstraint final : public ConstraintSet {
 public:
  RingBlockConstraint(Eigen::Index nBlocks, Eigen::Index blockDim, double innerRadius,
                      double outerRadius);

  Eigen::Index dim() const override { return nBlocks_ * blockDim_; }
  Vector project(const Vector& x) const override;
  bool contains(const Vector& x, double tol = kFeasTol) const override;
  double diameter() const override { return 2.0 * outer_ * std::sqrt(double(nBlocks_)); }
  double radius() const override { return outer_ * std::sqrt(double(nBlocks_)); }
  Vector minInfNormPoint() const override;

 private:
  Eigen::Index nBlocks_, blockDim_;
  double inner_, outer_;
};

// Free-function spellings of the family projections.
Vector project_box(const Vector& x, const BoxConstraint& box);
Vector project_cardinality(const Vector& x, const CardinalityPolytope& c);
Vector project_dykstra(const Vector& x, const PackingPolytope& p, double tol = 1e-9,
                       int maxIter = 10000);
Vector minkowski_project(const Vector& x, const MinkowskiSet& m);
Vector min_inf_norm_point(const ConstraintSet& c);

// Uniform sample from the unit sphere in R^d (Gaussian normalize).
Vector sphere_sample(Eigen::Index d, Rng& rng);

// Uniform sample from the unit ball in R^d.
Vector ball_sample(Eigen::Index d, Rng& rng);

}  // namespace drboost
