#pragma once

#include "randopt/cubic_solver.hpp"
#include "randopt/oracles.hpp"
#include "randopt/problems.hpp"
#include "randopt/rng.hpp"
#include "randopt/trace.hpp"

namespace randopt {

struct ArcConfig {
  double gamma = 0.5;
  double theta = 0.5;
  double sigma_min = 0.125;
  double sigma0 = 1.0;
  double kappa_theta = 0.5;
  std::size_t max_iters = 1000000;

  // Gated (fully-quadratic) variant only.
  double kappa_delta = 2.0;
  double xi0 = 1.0;

  void validate() const;
};

/// (f_x - f_trial) / model_decrease; throws NumericalError if model_decrease <= 0.
double rho(double f_x, double f_trial, double model_decrease);

/// sigma above which every accurate iteration is successful.
double sigma_c(double kappa_g, double kappa_h, double lip_grad, double lip_hess, double theta);
double kappa_f(double theta, double kappa_theta, double sigma_min);
double kappa_s(double kappa_g, double kappa_h, double lip_grad, double lip_hess);

/// Adaptive cubic regularization with random models.
///
/// Stops after the first successful iteration whose new iterate has
/// ||grad f|| <= eps; that iteration's index is the hitting index and its record
/// is the last one in the trace. The alpha column holds 1 / sigma_k.
Trace run_arc(const Objective& obj, const Vector& x0, const SecondOrderOracle& oracle,
              const ArcConfig& cfg, double eps, RngStream& rng);

/// ARC with an accuracy gate ||s|| >= kappa_delta xi_k / sigma_k; failing the
/// gate divides xi by kappa_delta and leaves x and sigma unchanged. Requires
/// eps <= 1 and max{L, L_H} >= 1.
Trace run_arc_fully_quadratic(const Objective& obj, const Vector& x0,
                              const SecondOrderOracle& oracle, const ArcConfig& cfg, double eps,
                              RngStream& rng);

}  // namespace randopt
