#include "drboost/objectives.hpp"

#include <cmath>

namespace drboost {

Vector Objective::noisyGrad(const Vector& x, Rng& rng) const {
  Vector g = grad(x);
  if (noiseScale() > 0.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] += noiseScale() * gauss(rng);
  }
  return g;
}

// --------------------------------------------------------- Quadratics

QuadraticObjective::QuadraticObjective(Matrix H, Vector h, double c, Vector upper, bool monotone)
    : H_(std::move(H)), h_(std::move(h)), c_(c), upper_(std::move(upper)), monotone_(monotone) {
  if (H_.rows() != H_.cols() || H_.rows() != h_.size() || upper_.size() != h_.size())
    throw ConfigError("QuadraticObjective: shape mismatch");
  if ((H_.array() > 1e-12).any())
    throw ConfigError("QuadraticObjective: Hessian entries must be <= 0");
  frob_ = H_.norm();
}

double QuadraticObjective::value(const Vector& x) const {
  requireDim(x, dim(), "QuadraticObjective::value");
  return 0.5 * x.dot(H_ * x) + h_.dot(x) + c_;
}

Vector QuadraticObjective::grad(const Vector& x) const {
  requireDim(x, dim(), "QuadraticObjective::grad");
  return H_ * x + h_;
}

static Matrix randomNonpositiveSymmetric(Eigen::Index n, Rng& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 0.0);
  Matrix H(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      double v = unif(rng);
      H(i, j) = v;
      H(j, i) = v;
    }
  return H;
}

QuadraticObjective make_monotone_quadratic(Eigen::Index n, Rng& rng) {
  Matrix H = randomNonpositiveSymmetric(n, rng);
  Vector u = Vector::Ones(n);
  Vector h = -(H.transpose() * u);
  return QuadraticObjective(std::move(H), std::move(h), 0.0, std::move(u), true);
}

QuadraticObjective make_nonmonotone_quadratic(Eigen::Index n, Rng& rng) {
  Matrix H = randomNonpositiveSymmetric(n, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector h(n);
  for (Eigen::Index i = 0; i < n; ++i) h[i] = unif(rng);
  return QuadraticObjective(std::move(H), std::move(h), double(n), Vector::Ones(n), false);
}

// --------------------------------------------------- Coverage specials

double fk_value(int k, const Vector& x) {
  if (k < 1) throw ConfigError("fk_value: k must be >= 1");
  requireDim(x, 2 * k + 1, "fk_value");
  const double last = x[2 * k];
  double prod = 1.0, headSum = 0.0, tailSum = 0.0;
  for (int i = 0; i < k; ++i) {
    prod *= 1.0 - x[i];
    headSum += x[i];
  }
  for (int i = k; i < 2 * k; ++i) tailSum += x[i];
  return k + 1 - (1.0 - last) * prod - (1.0 - last) * (k - headSum) + tailSum;
}

Vector fk_grad(int k, const Vector& x) {
  if (k < 1) throw ConfigError("fk_grad: k must be >= 1");
  requireDim(x, 2 * k + 1, "fk_grad");
  const double last = x[2 * k];
  Vector g(2 * k + 1);
  double prod = 1.0, headSum = 0.0;
  for (int i = 0; i < k; ++i) {
    prod *= 1.0 - x[i];
    headSum += x[i];
  }
  for (int j = 0; j < k; ++j) {
    // Product over the head coordinates excluding j, stable near x_j = 1.
    double prodExcl = 1.0;
    for (int i = 0; i < k; ++i)
      if (i != j) prodExcl *= 1.0 - x[i];
    g[j] = (1.0 - last) * (prodExcl + 1.0);
  }
  for (int j = k; j < 2 * k; ++j) g[j] = 1.0;
  g[2 * k] = prod + (k - headSum);
  return g;
}

double gk_value(int k, const Vector& x) {
  if (k < 1) throw ConfigError("gk_value: k must be >= 1");
  requireDim(x, 2 * k + 1, "gk_value");
  const double last = x[2 * k];
  double prod = 1.0, headSum = 0.0;
  for (int i = 0; i < k; ++i) {
    prod *= 1.0 - x[i];
    headSum += x[i];
  }
  return k + 1 - (1.0 - last) * prod - (1.0 - last) * (k - headSum) - headSum - last;
}

Vector gk_grad(int k, const Vector& x) {
  if (k < 1) throw ConfigError("gk_grad: k must be >= 1");
  requireDim(x, 2 * k + 1, "gk_grad");
  const double last = x[2 * k];
  Vector g = Vector::Zero(2 * k + 1);
  double prod = 1.0, headSum = 0.0;
  for (int i = 0; i < k; ++i) {
    prod *= 1.0 - x[i];
    headSum += x[i];
  }
  for (int j = 0; j < k; ++j) {
    double prodExcl = 1.0;
    for (int i = 0; i < k; ++i)
      if (i != j) prodExcl *= 1.0 - x[i];
    g[j] = (1.0 - last) * (prodExcl + 1.0) - 1.0;
  }
  g[2 * k] = prod + (k - headSum) - 1.0;
  return g;
}

CoverageMonotone::CoverageMonotone(int k) : k_(k) {
  if (k < 1) throw ConfigError("CoverageMonotone: k must be >= 1");
}

double CoverageMonotone::value(const Vector& x) const { return fk_value(k_, x); }
Vector CoverageMonotone::grad(const Vector& x) const { return fk_grad(k_, x); }

double CoverageMonotone::smoothness() const { return 2.0 * k_; }
double CoverageMonotone::lipschitz() const {
  return std::sqrt(5.0 * k_ + double(k_ + 1) * double(k_ + 1));
}

Vector CoverageMonotone::localMaxPoint() const {
  Vector x = Vector::Zero(dim());
  x.head(k_).setOnes();
  return x;
}

Vector CoverageMonotone::globalMaxPoint() const {
  Vector x = Vector::Zero(dim());
  x.tail(k_ + 1).setOnes();
  return x;
}

CoverageNonMonotone::CoverageNonMonotone(int k) : k_(k) {
  if (k < 1) throw ConfigError("CoverageNonMonotone: k must be >= 1");
}

double CoverageNonMonotone::value(const Vector& x) const { return gk_value(k_, x); }
Vector CoverageNonMonotone::grad(const Vector& x) const { return gk_grad(k_, x); }

double CoverageNonMonotone::smoothness() const { return 2.0 * k_; }
double CoverageNonMonotone::lipschitz() const { return std::sqrt(k_ + double(k_) * double(k_)); }

Vector CoverageNonMonotone::stationaryPoint() const {
  Vector x = Vector::Zero(dim());
  x.head(2 * k_).setOnes();
  return x;
}

Vector CoverageNonMonotone::globalMaxPoint() const {
  Vector x = Vector::Zero(dim());
  x[2 * k_] = 1.0;
  return x;
}

// ------------------------------------------------------------ Shifts

ShiftedObjective::ShiftedObjective(std::shared_ptr<const Objective> base)
    : base_(std::move(base)) {
  if (!base_) throw ConfigError("ShiftedObjective: null base");
  if (!base_->monotone())
    throw ConfigError("ShiftedObjective: value shift is only valid for monotone objectives");
  shift_ = base_->value(Vector::Zero(base_->dim()));
  setNoiseScale(base_->noiseScale());
}

}  // namespace drboost
