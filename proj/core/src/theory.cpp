#include "randopt/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "randopt/arc.hpp"
#include "randopt/types.hpp"

namespace randopt {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::ls_nonconvex: return "ls_nonconvex";
    case Regime::ls_general: return "ls_general";
    case Regime::ls_convex: return "ls_convex";
    case Regime::ls_strongly_convex: return "ls_strongly_convex";
    case Regime::arc: return "arc";
  }
  return "unknown";
}

double compute_C(Regime r, const TheoryConstants& c) {
  switch (r) {
    case Regime::ls_nonconvex:
    case Regime::ls_convex:
    case Regime::ls_strongly_convex:
      return (1.0 - c.theta) / (0.5 * c.lip_grad + c.kappa);
    case Regime::ls_general:
      return c.beta * (1.0 - c.theta) / (0.5 * c.lip_grad * c.kappa2 + c.kappa);
    case Regime::arc:
      return 1.0 / sigma_c(c.kappa_g, c.kappa_h, c.lip_grad, c.lip_hess, c.theta);
  }
  throw InvalidArgument("unknown regime");
}

std::function<double(double)> compute_h(Regime r, const TheoryConstants& c, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  const double denom = std::pow(1.0 + c.kappa * c.alpha_max, 2);
  std::function<double(double)> h;
  switch (r) {
    case Regime::ls_nonconvex:
      h = [=](double a) { return c.theta * eps * eps * a / denom; };
      break;
    case Regime::ls_general:
      h = [=](double a) { return c.theta * c.kappa1 * c.beta * eps * eps * a / denom; };
      break;
    case Regime::ls_convex:
      if (!(c.diameter > 0.0)) throw ConfigError("convex regime needs a positive level-set diameter");
      h = [=](double a) { return c.theta * a / (c.diameter * c.diameter * denom); };
      break;
    case Regime::ls_strongly_convex: {
      if (!(c.mu > 0.0)) throw ConfigError("strongly convex regime needs mu > 0");
      const double cc = compute_C(r, c);
      if (cc > denom / (2.0 * c.mu * c.theta)) {
        std::ostringstream msg;
        msg << "strongly convex gate violated: C = " << cc << " exceeds (1 + kappa alpha_max)^2 / (2 mu theta) = "
            << denom / (2.0 * c.mu * c.theta);
        throw ConfigError(msg.str());
      }
      h = [=](double a) {
        const double arg = 1.0 - 2.0 * c.mu * c.theta * a / denom;
        if (!(arg > 0.0)) return std::numeric_limits<double>::infinity();
        return -std::log(arg);
      };
      break;
    }
    case Regime::arc: {
      const double kf = kappa_f(c.theta, c.kappa_theta, c.sigma_min);
      const double cc = compute_C(r, c);
      h = [=](double a) { return kf * std::pow(std::min(a, cc), 1.5) * std::pow(eps, 1.5); };
      break;
    }
  }
  double prev = 0.0;
  constexpr int kGrid = 64;
  for (int i = 1; i <= kGrid; ++i) {
    const double a = c.alpha_max * i / kGrid;
    const double v = h(a);
    if (!(v > 0.0) || v < prev) throw ConfigError("h is not positive and nondecreasing on (0, alpha_max]");
    prev = v;
  }
  return h;
}

double compute_F_eps(Regime r, const TheoryConstants& c, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  switch (r) {
    case Regime::ls_nonconvex:
    case Regime::ls_general:
    case Regime::arc:
      return c.initial_gap;
    case Regime::ls_convex:
      return 1.0 / eps;
    case Regime::ls_strongly_convex:
      return std::log(std::max(1.0, c.initial_gap) / eps);
  }
  throw InvalidArgument("unknown regime");
}

double probability_factor(double p) {
  if (!(p > 0.5 && p <= 1.0)) throw InvalidArgument("the bound needs p in (1/2, 1]");
  return 2.0 * p / ((2.0 * p - 1.0) * (2.0 * p - 1.0));
}

double theoretical_bound(Regime r, const TheoryConstants& c, double p, double eps) {
  const double factor = probability_factor(p);
  const double cc = compute_C(r, c);
  const auto h = compute_h(r, c, eps);
  const double log_term = std::max(0.0, std::log(cc / c.alpha0) / std::log(c.gamma));
  return factor * (2.0 * compute_F_eps(r, c, eps) / h(cc) + log_term);
}

}  // namespace randopt
