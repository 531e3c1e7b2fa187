#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace genmod {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IndexVector = Eigen::VectorXi;

/// Thrown when an iterative solver fails to reach its stated tolerance.
/// The message carries the diagnostics (iteration count, residual size).
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown for malformed experiment configurations (bad JSON, unknown keys,
/// inconsistent parameters). The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace genmod
