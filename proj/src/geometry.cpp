#include "drboost/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace drboost {

Vector ConstraintSet::minInfNormPoint() const {
  Vector zero = Vector::Zero(dim());
  if (contains(zero)) return zero;
  if (explicitMinInf_) return *explicitMinInf_;
  throw ConfigError("minInfNormPoint: origin infeasible and no explicit point stored");
}

// ---------------------------------------------------------------- Box

BoxConstraint::BoxConstraint(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw ConfigError("BoxConstraint: bound sizes differ");
  if ((lower_.array() > upper_.array()).any())
    throw ConfigError("BoxConstraint: lower exceeds upper");
}

Vector BoxConstraint::project(const Vector& x) const {
  requireDim(x, dim(), "project_box");
  return x.cwiseMax(lower_).cwiseMin(upper_);
}

bool BoxConstraint::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  return (x.array() >= lower_.array() - tol).all() && (x.array() <= upper_.array() + tol).all();
}

Vector BoxConstraint::minInfNormPoint() const {
  // Componentwise nearest-to-zero point minimizes every norm over a box.
  return Vector::Zero(dim()).cwiseMax(lower_).cwiseMin(upper_);
}

std::optional<InnerBall> BoxConstraint::innerBall() const {
  if (innerBall_) return innerBall_;
  InnerBall b;
  b.center = 0.5 * (lower_ + upper_);
  b.radius = 0.5 * (upper_ - lower_).minCoeff();
  return b;
}

Vector project_box(const Vector& x, const BoxConstraint& box) { return box.project(x); }

// ------------------------------------------------------- Cardinality

CardinalityPolytope::CardinalityPolytope(Eigen::Index n, double budget, Vector upper)
    : budget_(budget), upper_(std::move(upper)) {
  if (n < 1 || upper_.size() != n) throw ConfigError("CardinalityPolytope: bad dimension");
  if (budget_ <= 0.0) throw ConfigError("CardinalityPolytope: budget must be positive");
  if ((upper_.array() < 0.0).any()) throw ConfigError("CardinalityPolytope: negative upper bound");
}

Vector CardinalityPolytope::project(const Vector& x) const {
  requireDim(x, dim(), "project_cardinality");
  Vector clamped = x.cwiseMax(0.0).cwiseMin(upper_);
  if (clamped.sum() <= budget_ + 1e-12) return clamped;
  // Bisection on the multiplier of the sum constraint:
  // result = clamp(x - lambda, 0, upper), sum(result) = budget.
  double lo = 0.0, hi = x.maxCoeff();
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double s = (x.array() - mid).cwiseMax(0.0).cwiseMin(upper_.array()).sum();
    if (s > budget_)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
  }
  double lambda = 0.5 * (lo + hi);
  return (x.array() - lambda).cwiseMax(0.0).cwiseMin(upper_.array()).matrix();
}

bool CardinalityPolytope::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  return (x.array() >= -tol).all() && (x.array() <= upper_.array() + tol).all() &&
         x.sum() <= budget_ + tol;
}

double CardinalityPolytope::diameter() const {
  // ||x - y||^2 <= ||x||^2 + ||y||^2 and ||x||^2 <= min(budget*max(u), ||u||^2).
  double cap = std::min(budget_ * upper_.maxCoeff(), upper_.squaredNorm());
  return std::sqrt(2.0 * cap);
}

double CardinalityPolytope::radius() const {
  return std::sqrt(std::min(budget_ * upper_.maxCoeff(), upper_.squaredNorm()));
}

Vector project_cardinality(const Vector& x, const CardinalityPolytope& c) {
  return c.project(x);
}

// ----------------------------------------------------------- Packing

PackingPolytope::PackingPolytope(Matrix A, Vector b, Vector upper, double tol, int maxIter)
    : A_(std::move(A)), b_(std::move(b)), upper_(std::move(upper)), tol_(tol), maxIter_(maxIter) {
  if (A_.rows() != b_.size() || A_.cols() != upper_.size())
    throw ConfigError("PackingPolytope: shape mismatch");
  if ((A_.array() < 0.0).any() || (b_.array() < 0.0).any())
    throw ConfigError("PackingPolytope: A and b must be nonnegative");
  if ((upper_.array() < 0.0).any()) throw ConfigError("PackingPolytope: negative upper bound");
}

bool PackingPolytope::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  if ((x.array() < -tol).any() || (x.array() > upper_.array() + tol).any()) return false;
  return ((A_ * x - b_).array() <= tol).all();
}

Vector PackingPolytope::project(const Vector& x) const {
  return project_dykstra(x, *this, tol_, maxIter_);
}

Vector project_dykstra(const Vector& x, const PackingPolytope& p, double tol, int maxIter) {
  requireDim(x, p.dim(), "project_dykstra");
  const Matrix& A = p.A();
  const Vector& b = p.b();
  const Eigen::Index m = A.rows();
  // One correction term for the box plus one per halfspace.
  std::vector<Vector> corr(static_cast<size_t>(m) + 1, Vector::Zero(x.size()));
  Vector z = x;
  double change = 0.0;
  for (int it = 0; it < maxIter; ++it) {
    change = 0.0;
    {
      Vector y = z + corr[0];
      Vector proj = y.cwiseMax(0.0).cwiseMin(p.upper());
      corr[0] = y - proj;
      change = std::max(change, (proj - z).lpNorm<Eigen::Infinity>());
      z = proj;
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      Vector y = z + corr[static_cast<size_t>(j) + 1];
      Vector a = A.row(j).transpose();
      double viol = a.dot(y) - b[j];
      Vector proj = viol > 0.0 ? Vector(y - (viol / a.squaredNorm()) * a) : y;
      corr[static_cast<size_t>(j) + 1] = y - proj;
      change = std::max(change, (proj - z).lpNorm<Eigen::Infinity>());
      z = proj;
    }
    if (change < tol) return z;
  }
  throw NumericError("project_dykstra: no convergence, residual " + std::to_string(change));
}

// --------------------------------------------------------- Minkowski

MinkowskiSet::MinkowskiSet(std::shared_ptr<const ConstraintSet> base, Vector pole,
                           double deltaPrime)
    : base_(std::move(base)), pole_(std::move(pole)), deltaPrime_(deltaPrime) {
  if (!base_) throw ConfigError("MinkowskiSet: null base");
  if (pole_.size() != base_->dim()) throw ConfigError("MinkowskiSet: pole dimension mismatch");
  if (deltaPrime_ <= 0.0) throw ConfigError("MinkowskiSet: shrink factor must be positive");
  if (!base_->contains(pole_)) throw ConfigError("MinkowskiSet: pole infeasible in base");
}

Vector MinkowskiSet::project(const Vector& x) const {
  requireDim(x, dim(), "minkowski_project");
  // Uniform scaling about the pole commutes with Euclidean projection.
  const double scale = 1.0 / (1.0 + deltaPrime_);
  Vector inflated = pole_ + (x - pole_) / scale;
  return pole_ + scale * (base_->project(inflated) - pole_);
}

bool MinkowskiSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  Vector inflated = pole_ + (1.0 + deltaPrime_) * (x - pole_);
  return base_->contains(inflated, (1.0 + deltaPrime_) * tol);
}

double MinkowskiSet::radius() const {
  const double scale = 1.0 / (1.0 + deltaPrime_);
  return pole_.norm() + scale * (base_->radius() + pole_.norm());
}

Vector MinkowskiSet::minInfNormPoint() const {
  Vector zero = Vector::Zero(dim());
  if (contains(zero)) return zero;
  if (explicitMinInf_) return *explicitMinInf_;
  // Fall back to the nearest member to the origin; exact for the
  // centrally-scaled families used here.
  return project(zero);
}

Vector minkowski_project(const Vector& x, const MinkowskiSet& m) { return m.project(x); }

// --------------------------------------------------------- Ring blocks

RingBlockConstraint::RingBlockConstraint(Eigen::Index nBlocks, Eigen::Index blockDim,
                                         double innerRadius, double outerRadius)
    : nBlocks_(nBlocks), blockDim_(blockDim), inner_(innerRadius), outer_(outerRadius) {
  if (nBlocks < 1 || blockDim < 1) throw ConfigError("RingBlockConstraint: bad shape");
  if (innerRadius < 0.0 || innerRadius > outerRadius)
    throw ConfigError("RingBlockConstraint: bad radii");
}

Vector RingBlockConstraint::project(const Vector& x) const {
  requireDim(x, dim(), "RingBlockConstraint::project");
  Vector out = x;
  for (Eigen::Index i = 0; i < nBlocks_; ++i) {
    auto blk = out.segment(i * blockDim_, blockDim_);
    double nrm = blk.norm();
    if (nrm > outer_) {
      blk *= outer_ / nrm;
    } else if (nrm < inner_) {
      if (nrm < 1e-14) {
        blk.setZero();
        blk[0] = inner_;
      } else {
        blk *= inner_ / nrm;
      }
    }
  }
  return out;
}

bool RingBlockConstraint::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  for (Eigen::Index i = 0; i < nBlocks_; ++i) {
    double nrm = x.segment(i * blockDim_, blockDim_).norm();
    if (nrm > outer_ + tol || nrm < inner_ - tol) return false;
  }
  return true;
}

Vector RingBlockConstraint::minInfNormPoint() const {
  // Smallest max-coordinate block of norm inner_: spread it evenly.
  Vector out = Vector::Zero(dim());
  double coord = inner_ / std::sqrt(double(blockDim_));
  for (Eigen::Index i = 0; i < nBlocks_; ++i)
    out.segment(i * blockDim_, blockDim_).setConstant(coord);
  return out;
}

// ----------------------------------------------------------- Sampling

Vector min_inf_norm_point(const ConstraintSet& c) { return c.minInfNormPoint(); }

Vector sphere_sample(Eigen::Index d, Rng& rng) {
  if (d < 1) throw ConfigError("sphere_sample: d must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(d);
  double nrm = 0.0;
  do {
    for (Eigen::Index i = 0; i < d; ++i) v[i] = gauss(rng);
    nrm = v.norm();
  } while (nrm < 1e-12);
  return v / nrm;
}

Vector ball_sample(Eigen::Index d, Rng& rng) {
  Vector v = sphere_sample(d, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return std::pow(unif(rng), 1.0 / double(d)) * v;
}

}  // namespace drboost
