#include "randopt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "randopt/arc.hpp"
#include "randopt/cubic_solver.hpp"
#include "randopt/rng.hpp"

namespace randopt {

namespace {

constexpr double kLatticeTol = 1e-6;

// Number of gamma-multiplications separating alpha from alpha0 (positive = smaller).
int lattice_level(double alpha, double alpha0, double gamma) {
  const double raw = std::log(alpha / alpha0) / std::log(gamma);
  const double r = std::round(raw);
  if (std::abs(raw - r) > kLatticeTol) {
    std::ostringstream msg;
    msg << "step size " << alpha << " is not on the lattice alpha0 * gamma^k (alpha0 = " << alpha0
        << ", gamma = " << gamma << ")";
    throw ConfigError(msg.str());
  }
  return static_cast<int>(r);
}

// Largest lattice index c with alpha0 * gamma^c <= C.
int c_level(double C, double alpha0, double gamma) {
  const double raw = std::log(C / alpha0) / std::log(gamma);
  const double near = std::round(raw);
  if (std::abs(raw - near) <= 1e-9) return static_cast<int>(near);
  return static_cast<int>(std::ceil(raw));
}

void check_schedule(const Trace& trace) {
  if (!(trace.alpha0 > 0.0 && trace.gamma > 0.0 && trace.gamma < 1.0 && trace.alpha_max > 0.0))
    throw InvalidArgument("trace is missing its step-size schedule");
}

std::size_t active_end(const Trace& trace) {
  return trace.hitting_index ? *trace.hitting_index : std::numeric_limits<std::size_t>::max();
}

bool within(double lhs, double rhs, double scale) { return lhs <= rhs + 1e-9 * std::max(1.0, scale); }

std::string at(std::size_t k) {
  std::ostringstream o;
  o << "iteration " << k << ": ";
  return o.str();
}

}  // namespace

ProcessDiagnostics diagnose_trace(const Trace& trace, double C, double F_eps,
                                  const std::function<double(double)>& h) {
  check_schedule(trace);
  if (!trace.hitting_index && !trace.capped)
    throw InvalidArgument("malformed trace: no hitting index and no iteration cap reached");
  if (!(C > 0.0)) throw InvalidArgument("C must be positive");
  if (!(C < trace.gamma * trace.alpha_max)) {
    std::ostringstream msg;
    msg << "C = " << C << " must be below gamma * alpha_max = " << trace.gamma * trace.alpha_max;
    throw ConfigError(msg.str());
  }
  lattice_level(trace.alpha_max, trace.alpha0, trace.gamma);

  ProcessDiagnostics d;
  d.C = C;
  d.c_level = c_level(C, trace.alpha0, trace.gamma);
  d.C_eff = trace.alpha0 * std::pow(trace.gamma, d.c_level);
  d.F_eps = F_eps;
  d.h_C = h(d.C_eff);

  const int c = d.c_level;
  const std::size_t j0 = c <= 0 ? static_cast<std::size_t>(1 - c) : 0;
  const std::size_t end = active_end(trace);
  std::size_t prefix = 0;
  std::size_t l = 0;
  for (const auto& r : trace.records) {
    if (r.k >= end) break;
    if (r.is_shrink) continue;
    if (!r.is_true) throw InvalidArgument("trace record lacks the accuracy indicator");
    const int lev = lattice_level(r.alpha, trace.alpha0, trace.gamma);
    const bool lam_bar = lev <= c;  // alpha >= C
    const bool lam = lev < c;       // alpha > C
    const bool tru = *r.is_true;
    const bool suc = r.is_successful;
    ++d.iterations;
    if (lam_bar && !tru && suc) ++d.n1;
    if (lam_bar && !tru) ++d.m1;
    if (lam_bar && tru && suc) ++d.n2;
    if (lam_bar && tru) ++d.m2;
    if (lam && tru && !suc) ++d.n3;
    if (lam && !suc) ++d.m3;
    if (!lam) {
      ++d.below_c;
      if (suc) {
        ++d.small_successes;
        ++prefix;
      }
    }
    if (2 * prefix > l + 1 + j0 && d.success_fraction_ok) {
      d.success_fraction_ok = false;
      std::ostringstream msg;
      msg << "small-step successes: " << prefix << " successes with alpha <= C among the first " << l + 1
          << " iterations (j0 = " << j0 << ")";
      d.violations.push_back(msg.str());
    }
    ++l;
  }

  const double n2_cap = F_eps / d.h_C;
  if (static_cast<double>(d.n2) > n2_cap * (1.0 + 1e-9)) {
    d.true_success_cap_ok = false;
    std::ostringstream msg;
    msg << "true successes: N2 = " << d.n2 << " exceeds F_eps / h(C) = " << n2_cap;
    d.violations.push_back(msg.str());
  }
  if (d.m2 > d.n2 + d.m3) {
    d.true_count_ok = false;
    std::ostringstream msg;
    msg << "true iterations: M2 = " << d.m2 << " exceeds N2 + M3 = " << d.n2 + d.m3;
    d.violations.push_back(msg.str());
  }
  const std::size_t levels = c > 0 ? static_cast<std::size_t>(c) : 0;
  if (d.m3 > d.n1 + d.n2 + levels) {
    d.decrease_count_ok = false;
    std::ostringstream msg;
    msg << "unsuccessful large steps: M3 = " << d.m3 << " exceeds N1 + N2 + log_gamma(C/alpha0) = " << d.n1 + d.n2 + levels;
    d.violations.push_back(msg.str());
  }
  return d;
}

void annotate_below_c(Trace& trace, double C) {
  check_schedule(trace);
  const int c = c_level(C, trace.alpha0, trace.gamma);
  for (auto& r : trace.records)
    r.below_C = lattice_level(r.alpha, trace.alpha0, trace.gamma) >= c;
}

LemmaReport check_ls_lemmas(const Trace& trace, const LemmaCheckContext& ctx) {
  check_schedule(trace);
  LemmaReport rep;
  const TheoryConstants& tc = ctx.constants;
  const double C = compute_C(ctx.regime, tc);
  const double denom = std::pow(1.0 + tc.kappa * tc.alpha_max, 2);
  auto flag = [&](bool hard, const std::string& what) {
    (hard ? rep.violations : rep.warnings).push_back(what);
  };

  const IterationRecord* prev = nullptr;
  for (const auto& r : trace.records) {
    if (prev) {
      if (r.f > prev->f + 1e-12 * std::max(1.0, std::abs(prev->f)))
        flag(true, at(r.k) + "objective increased");
      double expect = prev->alpha;
      if (!prev->is_shrink)
        expect = prev->is_successful ? std::min(tc.alpha_max, prev->alpha / tc.gamma) : prev->alpha * tc.gamma;
      if (std::abs(r.alpha - expect) > 1e-12 * expect) flag(true, at(r.k) + "step size update rule broken");
    }
    prev = &r;
    if (r.is_shrink) continue;
    ++rep.checked;
    const bool tru = r.is_true.value_or(false);
    if (tru && r.alpha <= C && !r.is_successful) {
      std::ostringstream msg;
      msg << at(r.k) << "accurate iteration with alpha = " << r.alpha << " <= C = " << C << " was unsuccessful";
      flag(true, msg.str());
    }
    if (!(tru && r.is_successful) || !r.f_trial) continue;
    const double f_next = *r.f_trial;
    const double g2 = r.grad_norm * r.grad_norm;
    switch (ctx.regime) {
      case Regime::ls_nonconvex:
      case Regime::ls_general: {
        const double need = (ctx.regime == Regime::ls_general ? tc.kappa1 * tc.beta : 1.0) * tc.theta *
                            r.alpha * g2 / denom;
        if (!within(need, r.f - f_next, std::abs(r.f)))
          flag(!ctx.constants_estimated, at(r.k) + "decrease below theta alpha ||grad f||^2 / (1 + kappa alpha_max)^2");
        break;
      }
      case Regime::ls_convex: {
        const double d0 = r.f - ctx.f_star;
        const double d1 = f_next - ctx.f_star;
        if (d0 <= 0.0 || d1 <= 0.0) break;
        const double need = tc.theta * r.alpha / (tc.diameter * tc.diameter * denom);
        const double got = 1.0 / d1 - 1.0 / d0;
        if (got < need - 1e-8 * (1.0 / d1))
          flag(!ctx.constants_estimated, at(r.k) + "1/gap increment below theta alpha / (D^2 (1 + kappa alpha_max)^2)");
        break;
      }
      case Regime::ls_strongly_convex: {
        const double d0 = r.f - ctx.f_star;
        const double d1 = f_next - ctx.f_star;
        const double factor = 1.0 - 2.0 * tc.mu * tc.theta * r.alpha / denom;
        if (d1 > factor * d0 + 1e-9 * std::abs(d0) + 1e-15 * std::max(1.0, std::abs(ctx.f_star)))
          flag(!ctx.constants_estimated, at(r.k) + "gap contraction weaker than 1 - 2 mu theta alpha / (1 + kappa alpha_max)^2");
        break;
      }
      case Regime::arc:
        throw InvalidArgument("check_ls_lemmas called with the ARC regime");
    }
  }
  return rep;
}

LemmaReport check_arc_lemmas(const Trace& trace, const LemmaCheckContext& ctx) {
  check_schedule(trace);
  LemmaReport rep;
  const TheoryConstants& tc = ctx.constants;
  const double sc = sigma_c(tc.kappa_g, tc.kappa_h, tc.lip_grad, tc.lip_hess, tc.theta);
  const double ks = kappa_s(tc.kappa_g, tc.kappa_h, tc.lip_grad, tc.lip_hess);
  const double kf = kappa_f(tc.theta, tc.kappa_theta, tc.sigma_min);
  const double sigma_min = 1.0 / trace.alpha_max;
  auto flag = [&](bool hard, const std::string& what) {
    (hard ? rep.violations : rep.warnings).push_back(what);
  };
  const bool analytic = !ctx.constants_estimated;

  const IterationRecord* prev = nullptr;
  for (const auto& r : trace.records) {
    if (!r.sigma) throw InvalidArgument("ARC trace record lacks sigma");
    const double sigma = *r.sigma;
    if (sigma < sigma_min * (1.0 - 1e-12)) flag(true, at(r.k) + "sigma below sigma_min");
    if (prev) {
      double expect = *prev->sigma;
      if (!prev->is_shrink)
        expect = prev->is_successful ? std::max(tc.gamma * expect, sigma_min) : expect / tc.gamma;
      if (std::abs(sigma - expect) > 1e-12 * expect) flag(true, at(r.k) + "sigma update rule broken");
      if (r.f > prev->f + 1e-12 * std::max(1.0, std::abs(prev->f))) flag(true, at(r.k) + "objective increased");
    }
    prev = &r;
    if (r.is_shrink) continue;
    ++rep.checked;
    const double sn = r.step_norm.value_or(0.0);
    const double cube = sigma * sn * sn * sn;
    const double dec = r.model_decrease.value_or(0.0);
    const double fscale = std::abs(r.f);
    if (dec < cube / 6.0 - 1e-10 * std::max(1.0, cube)) {
      std::ostringstream msg;
      msg << at(r.k) << "model decrease " << dec << " below sigma ||s||^3 / 6 = " << cube / 6.0;
      flag(true, msg.str());
    }
    const double actual = r.f - r.f_trial.value_or(r.f);
    if (r.is_successful && !within(tc.theta * cube / 6.0, actual, fscale))
      flag(true, at(r.k) + "successful decrease below theta sigma ||s||^3 / 6");

    if (!r.is_true.value_or(false)) continue;
    const double tg = r.trial_grad_norm.value_or(0.0);
    if (r.rho && sigma >= sc && !r.is_successful) {
      std::ostringstream msg;
      msg << at(r.k) << "accurate iteration with sigma = " << sigma << " >= sigma_c = " << sc << " was unsuccessful";
      flag(analytic, msg.str());
    }
    const double smin = std::sqrt((1.0 - tc.kappa_theta) * tg / (sigma + ks));
    if (sn < smin * (1.0 - 1e-9)) flag(analytic, at(r.k) + "step shorter than the accurate-model lower bound");
    if (r.is_successful) {
      const double need = kf * std::pow(tg, 1.5) / std::pow(std::max(sigma, sc), 1.5);
      if (!within(need, actual, fscale)) flag(analytic, at(r.k) + "decrease below kappa_f ||grad f||^1.5 / max(sigma, sigma_c)^1.5");
    }
  }

  // Fully-quadratic step bound on gated runs.
  for (const auto& r : trace.records) {
    if (r.is_shrink || !r.xi || !r.fully_accurate.value_or(false)) continue;
    const double sigma = *r.sigma;
    const double delta = *r.xi / sigma;
    const double sn = r.step_norm.value_or(0.0);
    const double lhs = (1.0 - tc.kappa_theta) * r.trial_grad_norm.value_or(0.0);
    const double rhs = (2.0 * tc.kappa_g + tc.kappa_h) * delta * std::max(delta, 1.0) +
                       (tc.lip_grad + tc.lip_hess + sigma) * sn * sn;
    if (!within(lhs, rhs, rhs)) flag(analytic, at(r.k) + "fully-quadratic step bound violated");
  }
  return rep;
}

SolverAudit audit_cubic_solver(std::size_t count, std::uint64_t seed, const std::vector<int>& dims,
                               double kappa_theta) {
  if (dims.empty()) throw InvalidArgument("audit needs at least one dimension");
  SolverAudit a;
  RngStream root(seed);
  for (std::size_t i = 0; i < count; ++i) {
    RngStream rng = root.split(i);
    const int n = dims[i % dims.size()];
    CubicSubproblem sub;
    sub.g = rng.normal_vector(n);
    Matrix e(n, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) e(r, c) = rng.normal();
    sub.b = 0.5 * (e + e.transpose());
    sub.sigma = 0.5 + 2.5 * rng.uniform();
    sub.kappa_theta = kappa_theta;
    const CubicStep step = solve_cubic(sub);
    const StepConditionReport rep = verify_step_conditions(sub, step.s);
    ++a.problems;

    const double sn = step.s.norm();
    const double scale = std::abs(step.s.dot(sub.g)) + std::abs(step.s.dot(sub.b * step.s)) + sub.sigma * sn * sn * sn;
    const double rel = scale > 0.0 ? rep.identity_residual / scale : rep.identity_residual;
    a.max_identity_rel = std::max(a.max_identity_rel, rel);
    if (!rep.identity_holds || !rep.curvature_holds) ++a.identity_failures;
    if (!rep.termination_holds) ++a.termination_failures;
    if (!rep.decrease_bound_holds) ++a.decrease_failures;

    if (n == 2) {
      const double mine = model_value(sub, step.s);
      double best = std::numeric_limits<double>::infinity();
      Vector s(2);
      for (int ix = 0; ix <= 400; ++ix) {
        s(0) = -3.0 + 6.0 * ix / 400.0;
        for (int iy = 0; iy <= 400; ++iy) {
          s(1) = -3.0 + 6.0 * iy / 400.0;
          best = std::min(best, model_value(sub, s));
        }
      }
      a.worst_grid_gap = std::max(a.worst_grid_gap, mine - best);
      if (mine > best + 1e-4) ++a.grid_failures;
    }
  }
  return a;
}

}  // namespace randopt
