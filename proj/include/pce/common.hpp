#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace pce {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Invalid user-supplied parameter (bad distribution parameters, thresholds, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Dimension mismatch between containers that must agree.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Covariance matrix is not symmetric positive semi-definite.
struct CovarianceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numeric routine failed to converge or left its domain.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A candidate vector is numerically dependent on the current basis.
struct DependenceError : std::runtime_error {
  int index;
  DependenceError(const std::string& msg, int idx) : std::runtime_error(msg), index(idx) {}
};

/// Rank deficiency detected while solving a least-squares system.
struct ConditioningError : std::runtime_error {
  int column;
  ConditioningError(const std::string& msg, int col) : std::runtime_error(msg), column(col) {}
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pce
