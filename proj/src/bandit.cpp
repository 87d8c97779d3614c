#include "drboost/bandit.hpp"

#include <chrono>
#include <cmath>

namespace drboost {

BanditConfig resolve_bandit_defaults(BanditConfig cfg, Eigen::Index d, double R) {
  const double dPow = std::cbrt(double(d));
  if (cfg.lambda <= 0.0) cfg.lambda = dPow * std::pow(double(cfg.T), -0.2);
  if (cfg.delta <= 0.0) cfg.delta = dPow * std::pow(double(cfg.T), -0.2);
  if (cfg.eta <= 0.0) cfg.eta = std::pow(double(cfg.T), -0.8) / dPow;
  cfg.lambda = std::min(cfg.lambda, 0.5);
  cfg.delta = std::min(cfg.delta, R / 2.0);
  return cfg;
}

BanditTrace bbga_run(const OnlineEnv& env, const ConstraintSet& C, const BanditConfig& rawCfg) {
  env.validate();
  if (env.horizon() != rawCfg.T) throw ConfigError("bbga_run: horizon/config mismatch");
  const Eigen::Index d = C.dim();
  std::optional<InnerBall> ball = rawCfg.innerBall ? rawCfg.innerBall : C.innerBall();
  if (!ball) throw ConfigError("bbga_run: constraint provides no inner ball");
  const BanditConfig cfg = resolve_bandit_defaults(rawCfg, d, ball->radius);
  if (cfg.delta >= ball->radius) throw ConfigError("bbga_run: delta must be below the ball radius");
  if (cfg.lambda <= 0.0 || cfg.lambda >= 1.0) throw ConfigError("bbga_run: lambda out of (0, 1)");

  const auto t0 = std::chrono::steady_clock::now();
  const double deltaPrime = cfg.delta / (ball->radius - cfg.delta);
  auto shrunken = MinkowskiSet(std::shared_ptr<const ConstraintSet>(&C, [](auto*) {}),
                               ball->center, deltaPrime);

  const Vector zero = Vector::Zero(d);
  if (cfg.option == AscentOption::I && !C.contains(zero))
    throw ConfigError("bbga_run: Option I requires the constraint to contain the origin");
  const Vector zeroShrunk = shrunken.project(zero);
  const Vector xUnder = C.minInfNormPoint();
  const Vector xUnderShrunk = shrunken.project(xUnder);

  const double coeff = cfg.option == AscentOption::I
                           ? (1.0 - std::exp(-cfg.gamma)) / cfg.gamma
                           : 3.0 / 8.0;

  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  BanditTrace trace;
  Vector y = cfg.option == AscentOption::I ? zeroShrunk : xUnderShrunk;
  for (int t = 0; t < cfg.T; ++t) {
    const Objective& f = *env.objectives[size_t(t)];
    BanditRoundRecord rec;
    rec.t = t + 1;
    rec.explore = unif(rng) < cfg.lambda;
    if (rec.explore) {
      rec.z = cfg.option == AscentOption::I ? sample_z_up(cfg.gamma, unif(rng))
                                            : sample_z_tilde(unif(rng));
      rec.direction = sphere_sample(d, rng);
      if (cfg.option == AscentOption::I)
        rec.played = rec.z * y + (1.0 - rec.z) * zeroShrunk + cfg.delta * rec.direction;
      else
        rec.played =
            (rec.z / 2.0) * (y - xUnderShrunk) + xUnderShrunk + cfg.delta * rec.direction;
      rec.reward = f.value(rec.played);
      rec.estimate = coeff * (double(d) / (cfg.lambda * cfg.delta)) * rec.reward * rec.direction;
      ++trace.exploreCount;
    } else {
      rec.played = cfg.option == AscentOption::I ? y : Vector(0.5 * (y + xUnder));
      rec.reward = f.value(rec.played);
      rec.estimate = Vector::Zero(d);
    }
    rec.feasible = C.contains(rec.played, 1e-9);
    if (!rec.feasible) ++trace.feasibilityViolations;
    trace.rewards.push_back(rec.reward);
    y = shrunken.project(y + cfg.eta * rec.estimate);
    trace.rounds.push_back(std::move(rec));
  }
  trace.wallClockSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return trace;
}

double smoothed_value_oracle(const Objective& f, const Vector& x, double delta, int mc,
                             Rng& rng) {
  if (delta <= 0.0 || mc < 1) throw ConfigError("smoothed_value_oracle: bad parameters");
  double total = 0.0;
  for (int i = 0; i < mc; ++i) total += f.value(x + delta * ball_sample(x.size(), rng));
  return total / double(mc);
}

FkmReport fkm_estimator_check(const Objective& f, const Vector& x, double delta, int samples,
                              Rng& rng) {
  if (x.size() != 2) throw ConfigError("fkm_estimator_check: dimension must be 2");
  if (delta <= 0.0 || samples < 2) throw ConfigError("fkm_estimator_check: bad parameters");

  FkmReport report;
  Vector mean = Vector::Zero(2), sumSq = Vector::Zero(2);
  const double scale = 2.0 / delta;
  for (int i = 0; i < samples; ++i) {
    Vector v = sphere_sample(2, rng);
    Vector sample = scale * f.value(x + delta * v) * v;
    mean += sample;
    sumSq += sample.cwiseProduct(sample);
  }
  mean /= double(samples);
  report.estimatorMean = mean;
  Vector var = sumSq / double(samples) - mean.cwiseProduct(mean);
  report.standardErrors = (var.cwiseMax(0.0) / double(samples)).cwiseSqrt();

  // Gradient of the smoothed function: average of grad f over the disk,
  // by Gauss-Legendre in radius (Jacobian r) x uniform angles.
  GaussLegendreRule rule = gauss_legendre(32);
  const int angles = 256;
  Vector quad = Vector::Zero(2);
  for (int i = 0; i < rule.nodes.size(); ++i) {
    const double r = 0.5 * (rule.nodes[i] + 1.0);
    const double wr = 0.5 * rule.weights[i] * r;  // weight times Jacobian
    for (int a = 0; a < angles; ++a) {
      const double th = 2.0 * M_PI * a / angles;
      Vector u(2);
      u << r * std::cos(th), r * std::sin(th);
      quad += wr * f.grad(x + delta * u) / double(angles);
    }
  }
  // Normalize by the disk area in (r, theta) coordinates: integral of r dr = 1/2.
  report.quadratureGrad = quad / 0.5;
  report.zScores = (report.estimatorMean - report.quadratureGrad)
                       .cwiseQuotient(report.standardErrors.cwiseMax(1e-300));
  return report;
}

}  // namespace drboost
