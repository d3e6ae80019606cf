#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace randopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Bad argument passed to a constructor or operation.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent experiment or algorithm configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values, solver non-convergence, iterate leaving the domain box.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A per-realization inequality from the analysis failed on a trace (CLI exit code 1).
class LemmaViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace randopt
