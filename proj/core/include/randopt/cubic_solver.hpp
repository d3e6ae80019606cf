#pragma once

#include "randopt/types.hpp"

namespace randopt {

/// m(s) = g^T s + 1/2 s^T B s + sigma/3 ||s||^3.
struct CubicSubproblem {
  Vector g;
  Matrix b;
  double sigma = 1.0;
  double kappa_theta = 0.5;
};

struct CubicStep {
  Vector s;
  double model_decrease = 0.0;  // m(0) - m(s)
  double multiplier = 0.0;      // nu = sigma ||s|| at the solution
  bool hard_case = false;
  int iterations = 0;

  // |s^T g + s^T B s + sigma ||s||^3|
  double identity_residual = 0.0;
  // s^T B s + sigma ||s||^3, must be nonnegative
  double curvature_term = 0.0;
  // ||grad m(s)|| / (min{1, ||s||} ||g||); 0 when the denominator vanishes and grad m(s) = 0
  double termination_ratio = 0.0;
};

/// Global minimizer of the cubic model.
///
/// Uses an eigendecomposition of B and a safeguarded Newton iteration on
/// 1/||s(nu)|| - sigma/nu, which is concave and increasing for
/// nu > max(0, -lambda_min). Throws NumericalError if the root is not bracketed
/// to precision within 200 iterations.
CubicStep solve_cubic(const CubicSubproblem& sub);

double model_value(const CubicSubproblem& sub, const Vector& s);
Vector model_gradient(const CubicSubproblem& sub, const Vector& s);

struct StepConditionReport {
  double identity_residual = 0.0;
  bool identity_holds = false;  // residual within 1e-8 of the terms' scale
  double curvature_term = 0.0;
  bool curvature_holds = false;
  double grad_norm = 0.0;  // ||grad m(s)||
  bool termination_holds = false;
  double decrease = 0.0;  // m(0) - m(s)
  bool decrease_bound_holds = false;

  bool all() const { return identity_holds && curvature_holds && termination_holds && decrease_bound_holds; }
};

/// Evaluates the two step identities, the relative termination condition with
/// sub.kappa_theta, and m(0) - m(s) >= sigma ||s||^3 / 6.
StepConditionReport verify_step_conditions(const CubicSubproblem& sub, const Vector& s);

}  // namespace randopt
