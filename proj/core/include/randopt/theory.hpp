#pragma once

#include <functional>
#include <string>

namespace randopt {

enum class Regime { ls_nonconvex, ls_general, ls_convex, ls_strongly_convex, arc };

std::string to_string(Regime r);

/// Constants the complexity analysis consumes. Fields not used by a regime are ignored.
struct TheoryConstants {
  double lip_grad = 0.0;    // L
  double lip_hess = 0.0;    // L_H
  double mu = 0.0;          // strong convexity modulus
  double diameter = 0.0;    // D, level-set diameter at x0
  double initial_gap = 0.0; // f(x0) - f*

  double theta = 0.5;
  double gamma = 0.5;
  double alpha0 = 0.5;      // ARC: 1 / sigma0
  double alpha_max = 1.0;   // ARC: 1 / sigma_min

  double kappa = 1.0;
  double beta = 1.0;
  double kappa1 = 1.0;
  double kappa2 = 1.0;

  double kappa_g = 1.0;
  double kappa_h = 1.0;
  double kappa_theta = 0.5;
  double sigma_min = 0.125;
};

/// Step-size threshold below which accurate iterations always succeed.
double compute_C(Regime r, const TheoryConstants& c);

/// Guaranteed progress h(alpha) of an accurate successful iteration before the
/// hitting time. Verifies h is positive and nondecreasing on (0, alpha_max].
/// The strongly convex h returns +inf past the end of its domain and the
/// constructor throws ConfigError if C lies past it.
std::function<double(double)> compute_h(Regime r, const TheoryConstants& c, double eps);

/// Upper bound F_eps on the progress measure before the hitting time.
double compute_F_eps(Regime r, const TheoryConstants& c, double eps);

/// 2p / (2p - 1)^2.
double probability_factor(double p);

/// 2p/(2p-1)^2 * (2 F_eps / h(C) + max(0, log_gamma(C / alpha0))).
double theoretical_bound(Regime r, const TheoryConstants& c, double p, double eps);

}  // namespace randopt
