#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace drboost {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

// Thrown when a caller passes structurally invalid input (dimension
// mismatch, out-of-range parameter, unknown id). The CLI maps this to
// exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a numerical routine fails to meet its contract (e.g. an
// iterative projection does not converge). The CLI maps this to exit
// code 1.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kFeasTol = 1e-7;

inline void requireDim(const Vector& x, Eigen::Index n, const char* where) {
  if (x.size() != n) throw ConfigError(std::string(where) + ": dimension mismatch");
}

}  // namespace drboost
