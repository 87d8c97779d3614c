#include "drboost/boosting.hpp"

#include <bit>
#include <cmath>
#include <map>

namespace drboost {

// ----------------------------------------------------------- BoostSpec

BoostSpec BoostSpec::monotoneSpec(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw ConfigError("BoostSpec: gamma must lie in (0, 1]");
  BoostSpec s;
  s.mode = BoostMode::Monotone;
  s.gamma = gamma;
  return s;
}

BoostSpec BoostSpec::nonMonotoneSpec(Vector xUnder) {
  BoostSpec s;
  s.mode = BoostMode::NonMonotone;
  s.xUnder = std::move(xUnder);
  return s;
}

double BoostSpec::coefficient() const {
  if (mode == BoostMode::Monotone) return (1.0 - std::exp(-gamma)) / gamma;
  return 3.0 / 8.0;
}

Vector BoostSpec::probePoint(const Vector& x, double z) const {
  if (mode == BoostMode::Monotone) return z * x;
  requireDim(xUnder, x.size(), "BoostSpec::probePoint");
  return (z / 2.0) * (x - xUnder) + xUnder;
}

// ------------------------------------------------------------ Samplers

double sample_z_up(double gamma, double u) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("sample_z_up: gamma out of (0, 1]");
  if (u < 0.0 || u > 1.0) throw ConfigError("sample_z_up: u out of [0, 1]");
  return std::log(1.0 + u * (std::exp(gamma) - 1.0)) / gamma;
}

double sample_z_tilde(double u) {
  if (u < 0.0 || u > 1.0) throw ConfigError("sample_z_tilde: u out of [0, 1]");
  return 2.0 * (1.0 - 1.0 / std::sqrt(1.0 + 3.0 * u));
}

double draw_z(const BoostSpec& spec, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  return spec.mode == BoostMode::Monotone ? sample_z_up(spec.gamma, u) : sample_z_tilde(u);
}

BoostedGradientSample boosted_grad(const BoostSpec& spec, const Objective& f, const Vector& x,
                                   Rng& rng) {
  if (spec.mode == BoostMode::Monotone && !f.monotone())
    throw ConfigError("boosted_grad: monotone mode requires a monotone objective");
  BoostedGradientSample s;
  s.z = draw_z(spec, rng);
  s.probePoint = spec.probePoint(x, s.z);
  s.estimate = spec.coefficient() * f.noisyGrad(s.probePoint, rng);
  return s;
}

// ---------------------------------------------------------- Quadrature

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: n must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-based initial guess.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double integrate01(const std::function<double(double)>& fn, int panels, int nodes) {
  GaussLegendreRule rule = gauss_legendre(nodes);
  double total = 0.0;
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = p * h;
    for (int i = 0; i < nodes; ++i)
      total += 0.5 * h * rule.weights[i] * fn(a + 0.5 * h * (rule.nodes[i] + 1.0));
  }
  return total;
}

static double gradWeight(const BoostSpec& spec, double z) {
  if (spec.mode == BoostMode::Monotone) return std::exp(spec.gamma * (z - 1.0));
  const double s = 1.0 - z / 2.0;
  return 1.0 / (8.0 * s * s * s);
}

Vector nonoblivious_grad_quadrature(const BoostSpec& spec, const Objective& f, const Vector& x) {
  GaussLegendreRule rule = gauss_legendre(16);
  const int panels = 32;
  Vector total = Vector::Zero(x.size());
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = p * h;
    for (int i = 0; i < rule.nodes.size(); ++i) {
      const double z = a + 0.5 * h * (rule.nodes[i] + 1.0);
      total += 0.5 * h * rule.weights[i] * gradWeight(spec, z) * f.grad(spec.probePoint(x, z));
    }
  }
  return total;
}

double nonoblivious_value_quadrature(const BoostSpec& spec, const Objective& f, const Vector& x) {
  if (spec.mode == BoostMode::Monotone) {
    double f0 = f.value(Vector::Zero(x.size()));
    if (std::abs(f0) > 1e-9)
      throw ConfigError("nonoblivious_value_quadrature: monotone mode requires f(0) = 0");
    return integrate01([&](double z) {
      return std::exp(spec.gamma * (z - 1.0)) * f.value(z * x) / z;
    });
  }
  const double fAnchor = f.value(spec.xUnder);
  return integrate01([&](double z) {
    const double s = 1.0 - z / 2.0;
    return (f.value(spec.probePoint(x, z)) - fAnchor) / (4.0 * z * s * s * s);
  });
}

// ----------------------------------------------------------- Constants

BoostingConstants boosting_constants(double gamma, double L, double L1, double sigma, double rX) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("boosting_constants: gamma out of (0, 1]");
  if (L < 0.0 || L1 < 0.0 || sigma < 0.0 || rX < 0.0)
    throw ConfigError("boosting_constants: negative input");
  BoostingConstants c;
  const double eg = std::exp(-gamma);
  c.smoothness = L * (gamma + eg - 1.0) / (gamma * gamma);
  c.lipschitz = (1.0 - eg) / gamma * L1;
  c.sigmaSq = 2.0 * (1.0 - eg) * (1.0 - eg) * sigma * sigma / (gamma * gamma) +
              2.0 * L * L * rX * rX * (1.0 - std::exp(-2.0 * gamma)) / (3.0 * gamma);
  c.thetaOpt = 1.0 / (1.0 - eg);
  return c;
}

BoostingConstants boosting_constants_nonmonotone(double L, double L1) {
  if (L < 0.0 || L1 < 0.0) throw ConfigError("boosting_constants_nonmonotone: negative input");
  BoostingConstants c;
  c.smoothness = L / 8.0;
  c.lipschitz = 3.0 * L1 / 8.0;
  return c;
}

// -------------------------------------------------- Inequality sweeps

static Vector randomFeasible(const ConstraintSet& C, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector x(C.dim());
  try {
    Vector u = C.upperBound();
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = unif(rng) * u[i];
  } catch (const ConfigError&) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = (2.0 * unif(rng) - 1.0) * C.radius();
  }
  return C.project(x);
}

InequalityReport check_corollary_inequalities(const Objective& f, const ConstraintSet& C,
                                              int trials, Rng& rng, double tol) {
  InequalityReport report;
  report.trials = trials;
  const Vector xUnder = C.minInfNormPoint();
  BoostSpec spec = f.monotone() ? BoostSpec::monotoneSpec(f.weakDr())
                                : BoostSpec::nonMonotoneSpec(xUnder);
  for (int t = 0; t < trials; ++t) {
    Vector x = randomFeasible(C, rng);
    Vector y = randomFeasible(C, rng);
    Vector gF = nonoblivious_grad_quadrature(spec, f, x);
    double lhs = gF.dot(y - x);
    double rhs;
    if (f.monotone()) {
      rhs = (1.0 - std::exp(-f.weakDr())) * f.value(y) - f.value(x);
    } else {
      const double ratio = (1.0 - xUnder.lpNorm<Eigen::Infinity>()) / 4.0;
      rhs = ratio * f.value(y) - f.value(0.5 * (x + xUnder));
    }
    double margin = lhs - rhs;
    if (margin < -tol) ++report.violations;
    report.worstMargin = std::min(report.worstMargin, margin);
  }
  return report;
}

// -------------------------------------------- Boosted set function

double boost_mix_coefficient(int a, int b, BoostMode mode) {
  if (b < 0 || b > a) throw ConfigError("boost_mix_coefficient: need 0 <= b <= a");
  if (mode == BoostMode::Monotone) {
    const double scale = 1.0 / (std::exp(1.0) - 1.0);
    return integrate01([&](double p) {
      return scale * std::exp(p) * std::pow(p, b) * std::pow(1.0 - p, a - b);
    });
  }
  return integrate01([&](double p) {
    return 0.125 * std::pow(p / 2.0, b) * std::pow(1.0 - p / 2.0, a - b - 3);
  });
}

std::shared_ptr<SetFunction> boosted_set_function(const SetFunction& base, BoostMode mode) {
  const int n = base.groundSize();
  if (n > 12) throw ConfigError("boosted_set_function: ground set larger than 12");
  if (mode == BoostMode::Monotone && std::abs(base.eval(0)) > 1e-12)
    throw ConfigError("boosted_set_function: monotone mode requires f(empty) = 0");
  const double shift = base.eval(0);

  std::map<std::pair<int, int>, double> mixCache;
  auto mix = [&](int a, int b) {
    auto key = std::make_pair(a, b);
    auto it = mixCache.find(key);
    if (it == mixCache.end()) it = mixCache.emplace(key, boost_mix_coefficient(a, b, mode)).first;
    return it->second;
  };

  std::vector<double> table(1ull << n, 0.0);
  for (uint64_t A = 1; A < (1ull << n); ++A) {
    const int a = std::popcount(A) - 1;
    double total = 0.0;
    // Iterate nonempty submasks B of A.
    for (uint64_t B = A; B != 0; B = (B - 1) & A)
      total += mix(a, std::popcount(B) - 1) * (base.eval(B) - shift);
    table[A] = total;
  }
  return std::make_shared<TableSetFunction>(n, std::move(table), base.monotone(),
                                            base.submodular());
}

}  // namespace drboost
