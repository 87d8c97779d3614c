#include <doctest.h>

#include <bit>
#include <cmath>

#include "drboost/minimax.hpp"
#include "drboost/set_function.hpp"

using namespace drboost;

namespace {

// Saddle objective that ignores the set: a strongly convex quadratic in x.
class PureConvex final : public ConvexSubmodularObjective {
 public:
  explicit PureConvex(Vector center) : center_(std::move(center)) {}
  Eigen::Index xDim() const override { return center_.size(); }
  int groundSize() const override { return 2; }
  double eval(const Vector& x, uint64_t) const override { return (x - center_).squaredNorm(); }
  Vector gradX(const Vector& x, uint64_t) const override { return 2.0 * (x - center_); }
  bool monotoneInS() const override { return true; }

 private:
  Vector center_;
};

// Saddle objective that ignores x: a monotone submodular set function.
class PureSet final : public ConvexSubmodularObjective {
 public:
  explicit PureSet(std::shared_ptr<const SetFunction> f) : f_(std::move(f)) {}
  Eigen::Index xDim() const override { return 1; }
  int groundSize() const override { return f_->groundSize(); }
  double eval(const Vector&, uint64_t mask) const override { return f_->eval(mask); }
  Vector gradX(const Vector&, uint64_t) const override { return Vector::Zero(1); }
  bool monotoneInS() const override { return f_->monotone(); }

 private:
  std::shared_ptr<const SetFunction> f_;
};

double enumerateMax(const MaskFn& fn, int n, int k) {
  double best = -1e300;
  for (uint64_t m = 0; m < (1ull << n); ++m)
    if (std::popcount(m) <= k) best = std::max(best, fn(m));
  return best;
}

}  // namespace

TEST_CASE("greedy set selection") {
  Vector w(5);
  w << 0.2, 1.5, 0.7, 2.0, 0.1;
  MaskFn modular = [&](uint64_t m) {
    double s = 0.0;
    for (int i = 0; i < 5; ++i)
      if (m & (1ull << i)) s += w[i];
    return s;
  };
  SetChoice top2 = greedy_max_set(modular, 5, 2);
  CHECK(top2.mask == ((1ull << 3) | (1ull << 1)));
  CHECK(top2.value == doctest::Approx(3.5));

  SetChoice none = greedy_max_set(modular, 5, 0);
  CHECK(none.mask == 0);
  CHECK(none.value == doctest::Approx(0.0));

  // Lowest-index tie-breaking.
  MaskFn flat = [](uint64_t m) { return double(std::popcount(m)); };
  CHECK(greedy_max_set(flat, 4, 2).mask == 0b11);

  CHECK_THROWS_AS(greedy_max_set(modular, 5, 9), ConfigError);
}

TEST_CASE("greedy earns its approximation factor on facility instances") {
  Rng rng(1);
  FacilityLocationSetFunction fac(synthetic_ratings(10, 8, rng));
  MaskFn fn = [&](uint64_t m) { return fac.eval(m); };
  SetChoice g = greedy_max_set(fn, 8, 3);
  double opt = enumerateMax(fn, 8, 3);
  CHECK(g.value >= (1.0 - std::exp(-1.0)) * opt - 1e-12);
  CHECK(g.value <= opt + 1e-12);
}

TEST_CASE("distorted greedy on regularized objectives") {
  Rng rng(2);
  auto fac = std::make_shared<FacilityLocationSetFunction>(synthetic_ratings(10, 8, rng));
  const double lambda = 0.1;
  const int k = 3;
  RegularizedSetFunction reg(fac, lambda, double(k));
  MaskFn fn = [&](uint64_t m) { return reg.eval(m); };
  MaskFn sub = [&](uint64_t m) { return fac->eval(m); };
  SetChoice d = distorted_greedy(sub, Vector::Constant(8, -lambda), fn, 8, k);
  double opt = enumerateMax(fn, 8, k);
  CHECK(d.value >= 0.9 * opt);

  // A dominant negative modular part selects nothing.
  SetChoice empty =
      distorted_greedy(sub, Vector::Constant(8, -100.0), fn, 8, k);
  CHECK(empty.mask == 0);

  CHECK_THROWS_AS(distorted_greedy(sub, Vector::Constant(3, -1.0), fn, 8, k), ConfigError);
}

TEST_CASE("set-oracle evaluation modes agree with brute force") {
  Rng rng(3);
  auto obj = make_convex_facility(2, 6, 3, 0.1, false, rng);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Vector x(obj.xDim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = unif(rng);
    MaskFn fn = [&](uint64_t m) { return obj.eval(x, m); };
    double brute = enumerateMax(fn, 6, 3);
    CHECK(minimax_eval(obj, x, 3, MaxSetMode::Enumerate) == doctest::Approx(brute));
    CHECK(minimax_eval(obj, x, 3, MaxSetMode::Greedy) <= brute + 1e-12);
  }
}

TEST_CASE("degenerate coupling reduces to projected convex minimization") {
  Vector center = Vector::Constant(2, 0.3);
  PureConvex obj(center);
  BoxConstraint K(2);
  CardinalityPolytope M(2, 1.0);
  MinimaxConfig cfg;
  cfg.T = 5000;
  cfg.seed = 5;
  MinimaxResult res = boosting_gda(obj, K, M, cfg);
  CHECK((res.xSol - center).norm() <= 0.05);
  for (const auto& x : res.xIterates) CHECK(K.contains(x, 1e-7));
  for (const auto& y : res.yIterates) CHECK(M.contains(y, 1e-7));

  // The reported solution is exactly the iterate average.
  Vector mean = Vector::Zero(2);
  for (const auto& x : res.xIterates) mean += x;
  mean /= double(res.xIterates.size());
  CHECK((mean - res.xSol).norm() <= 1e-12);
}

TEST_CASE("x-independent objective: the ascent side maximizes the extension") {
  Rng rng(6);
  auto fac = std::make_shared<FacilityLocationSetFunction>(synthetic_ratings(12, 8, rng));
  PureSet obj(fac);
  BoxConstraint K(1);
  CardinalityPolytope M(8, 3.0);
  MinimaxConfig cfg;
  cfg.T = 2000;
  cfg.seed = 7;
  MinimaxResult res = boosting_gda(obj, K, M, cfg);

  // Value of the relaxed final iterate against the enumerated optimum.
  MaskFn fn = [&](uint64_t m) { return fac->eval(m); };
  double opt = enumerateMax(fn, 8, 3);
  double achieved = multilinear_value_exact(*fac, res.yIterates.back());
  CHECK(achieved >= (1.0 - std::exp(-1.0)) * opt - 0.1 * opt);
}

TEST_CASE("facility saddle instance: values and gradients") {
  Rng rng(7);
  auto obj = make_convex_facility(2, 3, 2, 0.1, false, rng);
  CHECK(obj.xDim() == 6);
  CHECK(obj.monotoneInS());

  // Finite-difference check of the x-gradient at fixed sets.
  std::uniform_real_distribution<double> unif(0.3, 1.0);
  for (uint64_t mask = 0; mask < 8; ++mask) {
    Vector x(6);
    for (Eigen::Index i = 0; i < 6; ++i) x[i] = unif(rng);
    Vector g = obj.gradX(x, mask);
    for (Eigen::Index j = 0; j < 6; ++j) {
      Vector e = Vector::Zero(6);
      e[j] = 1e-6;
      double fd = (obj.eval(x + e, mask) - obj.eval(x - e, mask)) / 2e-6;
      CHECK(std::abs(fd - g[j]) <= 1e-4 * std::max(1.0, std::abs(g[j])));
    }
  }

  // Regularized variant adds the cardinality deficit and is non-monotone in S.
  Rng rng2(7);
  auto reg = make_convex_facility(2, 3, 2, 0.1, true, rng2);
  CHECK_FALSE(reg.monotoneInS());
  Vector x = Vector::Constant(6, 0.5);
  CHECK(reg.eval(x, 0b1) == doctest::Approx(obj.eval(x, 0b1) + 1.0));

  // Option I refuses the non-monotone variant.
  RingBlockConstraint K(3, 2, 0.1, 1.0);
  CardinalityPolytope M(3, 2.0);
  MinimaxConfig cfg;
  cfg.T = 10;
  CHECK_THROWS_AS(boosting_gda(reg, K, M, cfg), ConfigError);
}
