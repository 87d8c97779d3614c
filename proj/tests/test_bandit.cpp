#include <doctest.h>

#include <cmath>

#include "drboost/bandit.hpp"

using namespace drboost;

namespace {

OnlineEnv repeatedEnv(std::shared_ptr<const Objective> f, int T) {
  OnlineEnv env;
  env.objectives.assign(size_t(T), std::move(f));
  env.delays = delay_constant(T, 1);
  return env;
}

}  // namespace

TEST_CASE("default bandit parameters follow the scaling rules") {
  BanditConfig cfg;
  cfg.T = 100000;
  BanditConfig r = resolve_bandit_defaults(cfg, 8, 0.5);
  const double expected = std::cbrt(8.0) * std::pow(100000.0, -0.2);
  CHECK(r.lambda == doctest::Approx(expected));
  CHECK(r.delta == doctest::Approx(std::min(expected, 0.25)));
  CHECK(r.eta == doctest::Approx(std::pow(100000.0, -0.8) / std::cbrt(8.0)));

  // Small horizons clamp the raw formulas into valid ranges.
  cfg.T = 10;
  BanditConfig c = resolve_bandit_defaults(cfg, 8, 0.5);
  CHECK(c.lambda == doctest::Approx(0.5));
  CHECK(c.delta == doctest::Approx(0.25));

  // Explicit values pass through untouched (below the clamps).
  cfg.lambda = 0.3;
  cfg.delta = 0.05;
  cfg.eta = 0.01;
  BanditConfig p = resolve_bandit_defaults(cfg, 8, 0.5);
  CHECK(p.lambda == 0.3);
  CHECK(p.delta == 0.05);
  CHECK(p.eta == 0.01);
}

TEST_CASE("every played point is feasible at tight tolerance") {
  Rng rng(1);
  auto f = std::make_shared<QuadraticObjective>(make_monotone_quadratic(6, rng));
  BoxConstraint C(6);
  BanditConfig cfg;
  cfg.T = 3000;
  cfg.seed = 2;
  BanditTrace t = bbga_run(repeatedEnv(f, cfg.T), C, cfg);
  CHECK(t.feasibilityViolations == 0);
  for (const auto& r : t.rounds) CHECK(C.contains(r.played, 1e-9));

  auto g = std::make_shared<QuadraticObjective>(make_nonmonotone_quadratic(6, rng));
  BanditConfig cfg2 = cfg;
  cfg2.option = AscentOption::II;
  BanditTrace t2 = bbga_run(repeatedEnv(g, cfg2.T), C, cfg2);
  CHECK(t2.feasibilityViolations == 0);
}

TEST_CASE("exploration frequency matches the configured rate") {
  Rng rng(2);
  auto f = std::make_shared<QuadraticObjective>(make_monotone_quadratic(5, rng));
  BoxConstraint C(5);
  BanditConfig cfg;
  cfg.T = 5000;
  cfg.lambda = 0.3;
  cfg.seed = 3;
  BanditTrace t = bbga_run(repeatedEnv(f, cfg.T), C, cfg);
  const double frac = double(t.exploreCount) / double(cfg.T);
  const double se = std::sqrt(0.3 * 0.7 / double(cfg.T));
  CHECK(std::abs(frac - 0.3) <= 3.0 * se);

  // Rates above the 0.5 cap are clamped before the run.
  BanditConfig all = cfg;
  all.lambda = 0.999;
  BanditTrace ta = bbga_run(repeatedEnv(f, all.T), C, all);
  const double fracCap = double(ta.exploreCount) / double(all.T);
  const double seCap = std::sqrt(0.5 * 0.5 / double(all.T));
  CHECK(std::abs(fracCap - 0.5) <= 3.0 * seCap);
}

TEST_CASE("exploit rounds contribute a zero update and explore estimates stay bounded") {
  Rng rng(3);
  auto f = std::make_shared<QuadraticObjective>(make_monotone_quadratic(5, rng));
  BoxConstraint C(5);
  BanditConfig raw;
  raw.T = 2000;
  raw.seed = 4;
  BanditConfig cfg = resolve_bandit_defaults(raw, 5, 0.5);
  BanditTrace t = bbga_run(repeatedEnv(f, cfg.T), C, cfg);

  // |f| bound over the box for the estimator-scale check.
  double M = 0.0;
  Rng probe(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    Vector x(5);
    for (Eigen::Index j = 0; j < 5; ++j) x[j] = unif(probe);
    M = std::max(M, std::abs(f->value(x)));
  }
  const double coeff = 1.0 - std::exp(-1.0);
  const double bound = coeff * (5.0 / (cfg.lambda * cfg.delta)) * (M + 1e-9);
  for (const auto& r : t.rounds) {
    if (r.explore) {
      CHECK(r.estimate.norm() <= bound);
      CHECK(std::abs(r.direction.norm() - 1.0) < 1e-12);
      CHECK(r.z >= 0.0);
      CHECK(r.z <= 1.0);
    } else {
      CHECK(r.estimate.norm() == 0.0);
    }
  }
}

TEST_CASE("bandit run validation") {
  Rng rng(4);
  auto f = std::make_shared<QuadraticObjective>(make_monotone_quadratic(4, rng));
  BoxConstraint C(4);
  BanditConfig cfg;
  cfg.T = 50;
  OnlineEnv env = repeatedEnv(f, 40);  // horizon mismatch
  CHECK_THROWS_AS(bbga_run(env, C, cfg), ConfigError);

  // An oversized smoothing radius is clamped to half the inner-ball radius
  // and the run stays feasible.
  cfg.delta = 10.0;
  BanditTrace clamped = bbga_run(repeatedEnv(f, cfg.T), C, cfg);
  CHECK(clamped.feasibilityViolations == 0);

  // Option I needs the origin inside the constraint.
  BoxConstraint shifted(Vector::Constant(4, 0.2), Vector::Ones(4));
  BanditConfig cfg2;
  cfg2.T = 50;
  CHECK_THROWS_AS(bbga_run(repeatedEnv(f, cfg2.T), shifted, cfg2), ConfigError);
}

TEST_CASE("ball-average oracle preserves affine functions and bounds the bias") {
  Rng rng(5);
  Vector a(3);
  a << 0.5, 1.0, -0.25;
  QuadraticObjective lin(Matrix::Zero(3, 3), a, 0.2, Vector::Ones(3), false);
  Vector x = Vector::Constant(3, 0.5);
  const int mc = 50000;
  double smoothed = smoothed_value_oracle(lin, x, 0.1, mc, rng);
  const double se = lin.lipschitz() * 0.1 / std::sqrt(double(mc));
  CHECK(std::abs(smoothed - lin.value(x)) <= 3.0 * se);

  QuadraticObjective q = make_nonmonotone_quadratic(3, rng);
  double dev1 = std::abs(smoothed_value_oracle(q, x, 0.1, 100000, rng) - q.value(x));
  double dev2 = std::abs(smoothed_value_oracle(q, x, 0.05, 100000, rng) - q.value(x));
  CHECK(dev1 <= q.lipschitz() * 0.1 + 3.0 * q.lipschitz() * 0.1 / std::sqrt(1e5));
  CHECK(dev2 <= q.lipschitz() * 0.05 + 3.0 * q.lipschitz() * 0.05 / std::sqrt(1e5));
  CHECK_THROWS_AS(smoothed_value_oracle(q, x, -0.1, 10, rng), ConfigError);
}

TEST_CASE("one-point estimator agrees with the smoothed gradient") {
  Rng rng(6);
  // Constant objective: both paths vanish.
  QuadraticObjective c0(Matrix::Zero(2, 2), Vector::Zero(2), 1.0, Vector::Ones(2), false);
  Vector x = Vector::Constant(2, 0.5);
  FkmReport constant = fkm_estimator_check(c0, x, 0.1, 10000, rng);
  CHECK(constant.quadratureGrad.norm() < 1e-10);
  CHECK(std::abs(constant.zScores[0]) <= 3.0);
  CHECK(std::abs(constant.zScores[1]) <= 3.0);

  // Affine objective: both paths equal the coefficient vector.
  Vector a(2);
  a << 0.8, -0.3;
  QuadraticObjective lin(Matrix::Zero(2, 2), a, 0.0, Vector::Ones(2), false);
  FkmReport linear = fkm_estimator_check(lin, x, 0.1, 200000, rng);
  CHECK((linear.quadratureGrad - a).norm() < 1e-8);
  CHECK(std::abs(linear.zScores[0]) <= 3.0);
  CHECK(std::abs(linear.zScores[1]) <= 3.0);

  // Random quadratic: dual-path agreement within 3 standard errors.
  QuadraticObjective q = make_nonmonotone_quadratic(2, rng);
  FkmReport quad = fkm_estimator_check(q, x, 0.1, 200000, rng);
  CHECK(std::abs(quad.zScores[0]) <= 3.0);
  CHECK(std::abs(quad.zScores[1]) <= 3.0);

  CHECK_THROWS_AS(fkm_estimator_check(q, Vector::Zero(3), 0.1, 100, rng), ConfigError);
}
