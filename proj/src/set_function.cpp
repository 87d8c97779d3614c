#include "drboost/set_function.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

namespace drboost {

// --------------------------------------------------------- Families

FacilityLocationSetFunction::FacilityLocationSetFunction(Matrix ratings)
    : SetFunction(int(ratings.cols()), true, true), ratings_(std::move(ratings)) {
  if (ratings_.rows() < 1 || ratings_.cols() < 1)
    throw ConfigError("FacilityLocationSetFunction: empty ratings matrix");
  if ((ratings_.array() < 0.0).any())
    throw ConfigError("FacilityLocationSetFunction: ratings must be nonnegative");
}

double FacilityLocationSetFunction::eval(uint64_t mask) const {
  if (mask == 0) return 0.0;
  double total = 0.0;
  for (Eigen::Index u = 0; u < ratings_.rows(); ++u) {
    double best = 0.0;
    for (int m = 0; m < groundSize(); ++m)
      if (mask & (1ull << m)) best = std::max(best, ratings_(u, m));
    total += best;
  }
  return total / double(ratings_.rows());
}

RegularizedSetFunction::RegularizedSetFunction(std::shared_ptr<const SetFunction> base,
                                               double lambda, double k)
    : SetFunction(base ? base->groundSize() : 1, false, base && base->submodular()),
      base_(std::move(base)),
      lambda_(lambda),
      k_(k) {
  if (!base_) throw ConfigError("RegularizedSetFunction: null base");
  if (lambda < 0.0) throw ConfigError("RegularizedSetFunction: lambda must be >= 0");
}

double RegularizedSetFunction::eval(uint64_t mask) const {
  return base_->eval(mask) + lambda_ * (k_ - double(std::popcount(mask)));
}

ModularSetFunction::ModularSetFunction(Vector weights)
    : SetFunction(int(weights.size()), (weights.array() >= 0.0).all(), true),
      weights_(std::move(weights)) {}

double ModularSetFunction::eval(uint64_t mask) const {
  double total = 0.0;
  for (int i = 0; i < groundSize(); ++i)
    if (mask & (1ull << i)) total += weights_[i];
  return total;
}

TableSetFunction::TableSetFunction(int groundSize, std::vector<double> table, bool monotone,
                                   bool submodular)
    : SetFunction(groundSize, monotone, submodular), table_(std::move(table)) {
  if (table_.size() != (1ull << groundSize))
    throw ConfigError("TableSetFunction: table size must be 2^groundSize");
}

double TableSetFunction::eval(uint64_t mask) const { return table_[mask]; }

std::shared_ptr<SetFunction> facility_location_setfn(Matrix ratings) {
  return std::make_shared<FacilityLocationSetFunction>(std::move(ratings));
}

std::shared_ptr<SetFunction> regularized_setfn(std::shared_ptr<const SetFunction> base,
                                               double lambda, double k) {
  return std::make_shared<RegularizedSetFunction>(std::move(base), lambda, k);
}

// --------------------------------------------- Multilinear extension

static void checkExactMode(const SetFunction& f, const Vector& x) {
  if (f.groundSize() > 20)
    throw ConfigError("multilinear exact mode: ground set larger than 20");
  requireDim(x, f.groundSize(), "multilinear extension");
}

double multilinear_value_exact(const SetFunction& f, const Vector& x) {
  checkExactMode(f, x);
  const int n = f.groundSize();
  double total = 0.0;
  for (uint64_t m = 0; m < (1ull << n); ++m) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) w *= (m & (1ull << i)) ? x[i] : (1.0 - x[i]);
    if (w != 0.0) total += f.eval(m) * w;
  }
  return total;
}

Vector multilinear_grad_exact(const SetFunction& f, const Vector& x) {
  checkExactMode(f, x);
  const int n = f.groundSize();
  Vector g = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    const uint64_t bit = 1ull << i;
    for (uint64_t m = 0; m < (1ull << n); ++m) {
      if (m & bit) continue;
      double w = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        w *= (m & (1ull << j)) ? x[j] : (1.0 - x[j]);
      }
      if (w != 0.0) g[i] += (f.eval(m | bit) - f.eval(m)) * w;
    }
  }
  return g;
}

uint64_t sample_inclusion_mask(const Vector& x, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  uint64_t mask = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (unif(rng) < x[i]) mask |= 1ull << i;
  return mask;
}

Vector multilinear_grad_sampled(const SetFunction& f, const Vector& x, int batch, Rng& rng) {
  requireDim(x, f.groundSize(), "multilinear_grad_sampled");
  if (batch < 1) throw ConfigError("multilinear_grad_sampled: batch must be >= 1");
  const int n = f.groundSize();
  Vector g = Vector::Zero(n);
  for (int b = 0; b < batch; ++b) {
    uint64_t mask = sample_inclusion_mask(x, rng);
    for (int i = 0; i < n; ++i) {
      const uint64_t bit = 1ull << i;
      g[i] += f.eval(mask | bit) - f.eval(mask & ~bit);
    }
  }
  return g / double(batch);
}

MultilinearObjective::MultilinearObjective(std::shared_ptr<const SetFunction> base,
                                           int sampleBatch)
    : base_(std::move(base)), sampleBatch_(sampleBatch) {
  if (!base_) throw ConfigError("MultilinearObjective: null base");
  if (base_->groundSize() > 20)
    throw ConfigError("MultilinearObjective: exact mode capped at ground size 20");
  maxAbs_ = 0.0;
  for (uint64_t m = 0; m < (1ull << base_->groundSize()); ++m)
    maxAbs_ = std::max(maxAbs_, std::abs(base_->eval(m)));
}

Vector MultilinearObjective::noisyGrad(const Vector& x, Rng& rng) const {
  if (sampleBatch_ > 0) {
    Vector g = multilinear_grad_sampled(*base_, x, sampleBatch_, rng);
    if (noiseScale() > 0.0) {
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (Eigen::Index i = 0; i < g.size(); ++i) g[i] += noiseScale() * gauss(rng);
    }
    return g;
  }
  return Objective::noisyGrad(x, rng);
}

double MultilinearObjective::smoothness() const {
  // Mixed second partials are differences of four set values.
  return 2.0 * maxAbs_ * double(dim());
}

double MultilinearObjective::lipschitz() const { return maxAbs_ * std::sqrt(double(dim())); }

// ------------------------------------------------------------- Ratings

Matrix synthetic_ratings(Eigen::Index users, Eigen::Index movies, Rng& rng,
                         bool halfStarRounding) {
  if (users < 1 || movies < 1) throw ConfigError("synthetic_ratings: bad shape");
  std::uniform_real_distribution<double> unif(0.0, 5.0);
  Matrix r(users, movies);
  for (Eigen::Index u = 0; u < users; ++u)
    for (Eigen::Index m = 0; m < movies; ++m) {
      double v = unif(rng);
      r(u, m) = halfStarRounding ? std::round(v * 2.0) / 2.0 : v;
    }
  return r;
}

Matrix load_ratings_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_ratings_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("load_ratings_csv: empty file");
  struct Entry {
    long user, movie;
    double rating;
  };
  std::vector<Entry> entries;
  long maxUser = -1, maxMovie = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw ConfigError("load_ratings_csv: malformed row: " + line);
    Entry e{std::stol(a), std::stol(b), std::stod(c)};
    if (e.user < 0 || e.movie < 0 || e.rating < 0.0 || e.rating > 5.0)
      throw ConfigError("load_ratings_csv: out-of-range row: " + line);
    maxUser = std::max(maxUser, e.user);
    maxMovie = std::max(maxMovie, e.movie);
    entries.push_back(e);
  }
  if (entries.empty()) throw ConfigError("load_ratings_csv: no data rows");
  Matrix r = Matrix::Zero(maxUser + 1, maxMovie + 1);
  for (const auto& e : entries) r(e.user, e.movie) = e.rating;
  return r;
}

}  // namespace drboost
