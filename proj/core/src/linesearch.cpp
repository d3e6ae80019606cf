#include "randopt/linesearch.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace randopt {

DirectionTransform::DirectionTransform(std::vector<Matrix> family) : family_(std::move(family)) {
  if (family_.empty()) throw InvalidArgument("direction transform family is empty");
  const Eigen::Index n = family_.front().rows();
  double lmin = std::numeric_limits<double>::infinity();
  double lmax = 0.0;
  for (const Matrix& t : family_) {
    if (t.rows() != n || t.cols() != n) throw InvalidArgument("transform matrices must be square and equal-sized");
    if ((t - t.transpose()).norm() > 1e-12 * std::max(1.0, t.norm()))
      throw InvalidArgument("transform matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(t, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues()(0);
    if (!(lo > 0.0)) throw InvalidArgument("transform matrix is not positive definite");
    lmin = std::min(lmin, lo);
    lmax = std::max(lmax, eig.eigenvalues()(n - 1));
  }
  beta_ = lmin / lmax;
  kappa1_ = lmin;
  kappa2_ = lmax;
}

Vector DirectionTransform::direction(const Vector& g, std::size_t k) const {
  return -(family_[k % family_.size()] * g);
}

DirectionTransform make_general_direction(const Matrix& t) { return DirectionTransform({t}); }

DirectionTransform make_general_direction(const std::vector<Matrix>& family) {
  return DirectionTransform(family);
}

void LsConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
  if (!(alpha_max > 0.0) || !std::isfinite(alpha_max)) throw InvalidArgument("alpha_max must be positive");
  if (!(alpha0 > 0.0 && alpha0 < alpha_max)) throw InvalidArgument("alpha0 must lie in (0, alpha_max)");
  if (max_iters == 0) throw InvalidArgument("max_iters must be positive");
  if (variant == DirectionVariant::general && !transform)
    throw InvalidArgument("general direction variant needs a transform");
  if (!(kappa_delta > 1.0)) throw InvalidArgument("kappa_delta must exceed 1");
  if (!(xi0 > 0.0)) throw InvalidArgument("xi0 must be positive");
}

bool armijo_check(double f_x, double f_trial, double alpha, double theta, const Vector& g,
                  const Vector* d) {
  if (d) return f_trial <= f_x + alpha * theta * d->dot(g);
  return f_trial <= f_x - alpha * theta * g.squaredNorm();
}

namespace {

bool hit(const StoppingRule& stop, double f, double grad_norm, double f_star) {
  if (stop.event == HittingEvent::gradient_norm) return grad_norm <= stop.eps;
  return f - f_star <= stop.eps;
}

void require_finite(double v, const char* what, std::size_t k) {
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "non-finite " << what << " at iteration " << k;
    throw NumericalError(msg.str());
  }
}

Trace run_impl(const Objective& obj, const Vector& x0, const FirstOrderOracle& oracle,
               const LsConfig& cfg, const StoppingRule& stop, RngStream& rng, bool gated) {
  cfg.validate();
  if (!(stop.eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (x0.size() != obj.dim()) throw InvalidArgument("x0 has the wrong dimension");
  if (cfg.transform && cfg.transform->dim() != obj.dim())
    throw InvalidArgument("direction transform has the wrong dimension");
  const auto& consts = obj.constants();
  const OracleConfig& ocfg = oracle.config();
  const std::size_t cap = stop.max_iters.value_or(cfg.max_iters);
  const bool general = cfg.variant == DirectionVariant::general;

  Trace tr;
  tr.algorithm = gated ? "ls_fully_linear" : (general ? "ls_general" : "ls_steepest");
  tr.alpha0 = cfg.alpha0;
  tr.alpha_max = cfg.alpha_max;
  tr.gamma = cfg.gamma;

  if (consts.domain && !consts.domain->contains(x0))
    throw InvalidArgument("x0 lies outside the objective's domain box");

  Vector x = x0;
  double alpha = cfg.alpha0;
  double xi = cfg.xi0;
  double f_x = obj.value(x);
  Vector grad = obj.gradient(x);
  std::optional<LinearModel> held;

  std::size_t k = 0;
  for (; k < cap; ++k) {
    require_finite(f_x, "objective value", k);
    if (!all_finite(grad)) require_finite(std::numeric_limits<double>::quiet_NaN(), "gradient", k);
    const double gn = grad.norm();
    if (hit(stop, f_x, gn, consts.f_star)) {
      tr.hitting_index = k;
      break;
    }

    LinearModel model = held ? *held : oracle.sample(obj, x, alpha, alpha * xi, rng);
    held.reset();
    if (!all_finite(model.g)) require_finite(std::numeric_limits<double>::quiet_NaN(), "model gradient", k);

    IterationRecord rec;
    rec.k = k;
    rec.alpha = alpha;
    rec.f = f_x;
    rec.grad_norm = gn;
    rec.model_grad_norm = model.g.norm();
    if (gated) {
      rec.xi = xi;
      rec.fully_accurate = (model.g - grad).norm() <= ocfg.kappa_g * alpha * xi;
    }

    if (gated && rec.model_grad_norm < cfg.kappa_delta * xi) {
      rec.is_shrink = true;
      tr.records.push_back(rec);
      xi /= cfg.kappa_delta;
      continue;
    }

    const Vector d = general ? cfg.transform->direction(model.g, k) : Vector(-model.g);
    const Vector x_trial = x + alpha * d;
    const double f_trial = obj.value(x_trial);
    require_finite(f_trial, "trial objective value", k);
    const bool ok = general ? armijo_check(f_x, f_trial, alpha, cfg.theta, model.g, &d)
                            : armijo_check(f_x, f_trial, alpha, cfg.theta, model.g);

    rec.step_norm = alpha * d.norm();
    rec.is_true = check_ls_accuracy(model.g, grad, ocfg.kappa, alpha);
    rec.is_successful = ok;
    rec.f_trial = f_trial;
    tr.records.push_back(rec);

    if (ok) {
      if (consts.domain && !consts.domain->contains(x_trial)) {
        std::ostringstream msg;
        msg << "iterate left the domain box at iteration " << k;
        throw NumericalError(msg.str());
      }
      x = x_trial;
      f_x = f_trial;
      grad = obj.gradient(x);
      alpha = std::min(cfg.alpha_max, alpha / cfg.gamma);
    } else {
      alpha *= cfg.gamma;
      if (cfg.hold_model_on_failure) held = model;
    }
  }
  if (!tr.hitting_index && std::isfinite(f_x) && hit(stop, f_x, grad.norm(), consts.f_star))
    tr.hitting_index = k;
  tr.capped = !tr.hitting_index;
  tr.x_final = x;
  tr.f_final = f_x;
  return tr;
}

}  // namespace

Trace run_linesearch(const Objective& obj, const Vector& x0, const FirstOrderOracle& oracle,
                     const LsConfig& cfg, const StoppingRule& stop, RngStream& rng) {
  return run_impl(obj, x0, oracle, cfg, stop, rng, false);
}

Trace run_ls_fully_linear(const Objective& obj, const Vector& x0, const FirstOrderOracle& oracle,
                          const LsConfig& cfg, const StoppingRule& stop, RngStream& rng) {
  return run_impl(obj, x0, oracle, cfg, stop, rng, true);
}

}  // namespace randopt
