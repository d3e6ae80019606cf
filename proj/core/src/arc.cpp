#include "randopt/arc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace randopt {

void ArcConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
  if (!(kappa_theta > 0.0 && kappa_theta < 1.0)) throw InvalidArgument("kappa_theta must lie in (0, 1)");
  if (!(sigma_min > 0.0) || !std::isfinite(sigma_min)) throw InvalidArgument("sigma_min must be positive");
  if (!(sigma0 > sigma_min) || !std::isfinite(sigma0)) throw InvalidArgument("sigma0 must exceed sigma_min");
  if (max_iters == 0) throw InvalidArgument("max_iters must be positive");
  if (!(kappa_delta > 1.0)) throw InvalidArgument("kappa_delta must exceed 1");
  if (!(xi0 > 0.0)) throw InvalidArgument("xi0 must be positive");
}

double rho(double f_x, double f_trial, double model_decrease) {
  if (!(model_decrease > 0.0)) {
    std::ostringstream msg;
    msg << "nonpositive model decrease " << model_decrease;
    throw NumericalError(msg.str());
  }
  return (f_x - f_trial) / model_decrease;
}

double sigma_c(double kappa_g, double kappa_h, double lip_grad, double lip_hess, double theta) {
  return (2.0 * kappa_g + kappa_h + lip_grad + lip_hess) / (1.0 - theta / 3.0);
}

double kappa_f(double theta, double kappa_theta, double sigma_min) {
  return theta / (12.0 * std::sqrt(2.0)) * std::pow(1.0 - kappa_theta, 1.5) * sigma_min;
}

double kappa_s(double kappa_g, double kappa_h, double lip_grad, double lip_hess) {
  return 2.0 * kappa_g + kappa_h + lip_grad + lip_hess;
}

namespace {

void require_finite(double v, const char* what, std::size_t k) {
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "non-finite " << what << " at iteration " << k;
    throw NumericalError(msg.str());
  }
}

Trace run_impl(const Objective& obj, const Vector& x0, const SecondOrderOracle& oracle,
               const ArcConfig& cfg, double eps, RngStream& rng, bool gated) {
  cfg.validate();
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (x0.size() != obj.dim()) throw InvalidArgument("x0 has the wrong dimension");
  const auto& consts = obj.constants();
  if (gated) {
    if (eps > 1.0) throw InvalidArgument("the gated ARC variant needs eps <= 1");
    if (std::max(consts.lip_grad, consts.lip_hess.value_or(0.0)) < 1.0)
      throw InvalidArgument("the gated ARC variant needs max{L, L_H} >= 1");
  }
  if (consts.domain && !consts.domain->contains(x0))
    throw InvalidArgument("x0 lies outside the objective's domain box");
  const OracleConfig& ocfg = oracle.config();

  Trace tr;
  tr.algorithm = gated ? "arc_fully_quadratic" : "arc";
  tr.alpha0 = 1.0 / cfg.sigma0;
  tr.alpha_max = 1.0 / cfg.sigma_min;
  tr.gamma = cfg.gamma;

  Vector x = x0;
  double sigma = cfg.sigma0;
  double xi = cfg.xi0;
  double f_x = obj.value(x);
  Vector grad = obj.gradient(x);
  Matrix hess = obj.hessian(x);

  std::size_t k = 0;
  for (; k < cfg.max_iters; ++k) {
    require_finite(f_x, "objective value", k);
    require_finite(sigma, "regularization weight", k);
    const double radius = xi / sigma;
    const QuadraticModel model = oracle.sample(obj, x, radius, rng);
    if (!all_finite(model.g) || !all_finite(model.b))
      require_finite(std::nan(""), "model data", k);
    const CubicSubproblem sub{model.g, model.b, sigma, cfg.kappa_theta};
    const CubicStep step = solve_cubic(sub);
    const double sn = step.s.norm();

    IterationRecord rec;
    rec.k = k;
    rec.alpha = 1.0 / sigma;
    rec.sigma = sigma;
    rec.f = f_x;
    rec.grad_norm = grad.norm();
    rec.model_grad_norm = model.g.norm();
    rec.step_norm = sn;
    rec.model_decrease = step.model_decrease;
    if (gated) {
      rec.xi = xi;
      rec.fully_accurate = (grad - model.g).norm() <= ocfg.kappa_g * radius * radius &&
                           (hess - model.b).norm() <= ocfg.kappa_h * radius;
    }

    if (gated && sn < cfg.kappa_delta * radius) {
      rec.is_shrink = true;
      rec.step_norm.reset();
      tr.records.push_back(rec);
      xi /= cfg.kappa_delta;
      continue;
    }

    const Vector x_trial = x + step.s;
    const double f_trial = obj.value(x_trial);
    require_finite(f_trial, "trial objective value", k);
    const Vector grad_trial = obj.gradient(x_trial);

    bool ok = false;
    if (step.model_decrease > 1e-14 * std::abs(f_x)) {
      rec.rho = rho(f_x, f_trial, step.model_decrease);
      ok = *rec.rho >= cfg.theta;
    }
    rec.is_true = check_arc_accuracy(model.g, model.b, grad, hess, step.s, ocfg.kappa_g, ocfg.kappa_h);
    rec.is_successful = ok;
    rec.f_trial = f_trial;
    rec.trial_grad_norm = grad_trial.norm();
    tr.records.push_back(rec);

    if (ok) {
      if (consts.domain && !consts.domain->contains(x_trial)) {
        std::ostringstream msg;
        msg << "iterate left the domain box at iteration " << k;
        throw NumericalError(msg.str());
      }
      x = x_trial;
      f_x = f_trial;
      grad = grad_trial;
      hess = obj.hessian(x);
      sigma = std::max(cfg.gamma * sigma, cfg.sigma_min);
      if (*rec.trial_grad_norm <= eps) {
        tr.hitting_index = k;
        break;
      }
    } else {
      sigma /= cfg.gamma;
    }
  }
  tr.capped = !tr.hitting_index;
  tr.x_final = x;
  tr.f_final = f_x;
  return tr;
}

}  // namespace

Trace run_arc(const Objective& obj, const Vector& x0, const SecondOrderOracle& oracle,
              const ArcConfig& cfg, double eps, RngStream& rng) {
  return run_impl(obj, x0, oracle, cfg, eps, rng, false);
}

Trace run_arc_fully_quadratic(const Objective& obj, const Vector& x0,
                              const SecondOrderOracle& oracle, const ArcConfig& cfg, double eps,
                              RngStream& rng) {
  return run_impl(obj, x0, oracle, cfg, eps, rng, true);
}

}  // namespace randopt
