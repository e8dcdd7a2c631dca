#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace plab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Extended-real +inf, used by indicator regularizers.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite value or gradient encountered while evaluating an objective.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// A sampling-based estimator had no usable samples.
class EstimationError : public Error {
 public:
  using Error::Error;
};

// A point lies outside the effective domain of g (e.g. infeasible for a box).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inconsistent or unsupported configuration (bad shapes, missing oracles, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace plab
