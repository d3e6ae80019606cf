#include "randopt/cubic_solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace randopt {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kHardCaseTol = 1e-12;

void validate(const CubicSubproblem& sub) {
  if (!(sub.sigma > 0.0) || !std::isfinite(sub.sigma))
    throw InvalidArgument("cubic subproblem needs sigma > 0");
  if (sub.b.rows() != sub.g.size() || sub.b.cols() != sub.g.size())
    throw InvalidArgument("cubic subproblem dimensions do not match");
  if (!all_finite(sub.g) || !all_finite(sub.b))
    throw NumericalError("cubic subproblem has non-finite data");
}

void fill_residuals(const CubicSubproblem& sub, CubicStep& step) {
  const double sn = step.s.norm();
  const double sbs = step.s.dot(sub.b * step.s);
  const double cube = sub.sigma * sn * sn * sn;
  step.identity_residual = std::abs(step.s.dot(sub.g) + sbs + cube);
  step.curvature_term = sbs + cube;
  const double gm = model_gradient(sub, step.s).norm();
  const double denom = std::min(1.0, sn) * sub.g.norm();
  step.termination_ratio = denom > 0.0 ? gm / denom : (gm == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  step.model_decrease = -model_value(sub, step.s);
}

}  // namespace

double model_value(const CubicSubproblem& sub, const Vector& s) {
  const double sn = s.norm();
  return sub.g.dot(s) + 0.5 * s.dot(sub.b * s) + sub.sigma / 3.0 * sn * sn * sn;
}

Vector model_gradient(const CubicSubproblem& sub, const Vector& s) {
  return sub.g + sub.b * s + sub.sigma * s.norm() * s;
}

CubicStep solve_cubic(const CubicSubproblem& sub) {
  validate(sub);
  const Eigen::Index n = sub.g.size();
  const Matrix sym = 0.5 * (sub.b + sub.b.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Vector& lam = eig.eigenvalues();  // ascending
  const Matrix& v = eig.eigenvectors();
  const double lam1 = lam(0);
  const double sigma = sub.sigma;
  const double gnorm = sub.g.norm();

  CubicStep step;
  step.s = Vector::Zero(n);

  if (gnorm == 0.0) {
    if (lam1 < 0.0) {
      step.s = (-lam1 / sigma) * v.col(0);
      step.multiplier = -lam1;
      step.hard_case = true;
    }
    fill_residuals(sub, step);
    return step;
  }

  const Vector gh = v.transpose() * sub.g;
  const double lower = std::max(0.0, -lam1);
  const double scale = std::max({1.0, std::abs(lam1), std::abs(lam(n - 1))});

  // Components in the leftmost eigenspace.
  Eigen::Index m = 0;
  while (m < n && lam(m) - lam1 <= 1e-12 * scale) ++m;
  const double lead = gh.head(m).norm();

  if (lam1 < 0.0 && lead < kHardCaseTol * gnorm) {
    Vector sh = Vector::Zero(n);
    for (Eigen::Index i = m; i < n; ++i) sh(i) = -gh(i) / (lam(i) - lam1);
    const double target = -lam1 / sigma;
    const double shn = sh.norm();
    if (shn <= target) {
      sh(0) = std::sqrt(std::max(0.0, target * target - shn * shn));
      step.s = v * sh;
      step.multiplier = -lam1;
      step.hard_case = true;
      fill_residuals(sub, step);
      return step;
    }
  }

  auto s_norm = [&](double nu, double* dnorm3) {
    double a = 0.0, b = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = lam(i) + nu;
      const double q = gh(i) * gh(i);
      a += q / (w * w);
      b += q / (w * w * w);
    }
    if (dnorm3) *dnorm3 = b;
    return std::sqrt(a);
  };

  double lo = lower;
  double hi = 0.5 * (-lam1 + std::sqrt(lam1 * lam1 + 4.0 * sigma * gnorm));
  hi = std::max(hi, lower);
  double nu = hi;
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    double b3 = 0.0;
    const double sn = s_norm(nu, &b3);
    const double target = sigma * sn;
    if (std::abs(target - nu) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(nu, target)) break;
    const double psi = 1.0 / sn - sigma / nu;
    if (psi < 0.0) lo = nu; else hi = nu;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    const double dpsi = b3 / (sn * sn * sn) + sigma / (nu * nu);
    double next = nu - psi / dpsi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == nu) break;
    nu = next;
  }
  if (it == kMaxIterations) {
    std::ostringstream msg;
    msg << "cubic secular equation did not converge: bracket [" << lo << ", " << hi
        << "], sigma " << sigma << ", ||g|| " << gnorm << ", lambda_min " << lam1;
    throw NumericalError(msg.str());
  }

  Vector sh(n);
  for (Eigen::Index i = 0; i < n; ++i) sh(i) = -gh(i) / (lam(i) + nu);

  // Near the hard case lambda_1 + nu is tiny and the leading coefficients carry
  // most of the rounding error. Rescale them so sigma ||s|| = nu holds exactly.
  if (lower > 0.0 && std::abs(sigma * sh.norm() - nu) > 1e-12 * nu) {
    const double rest = sh.tail(n - m).squaredNorm();
    const double lead2 = sh.head(m).squaredNorm();
    const double want = nu / sigma;
    if (lead2 > 0.0 && want * want >= rest) sh.head(m) *= std::sqrt((want * want - rest) / lead2);
  }
  step.s = v * sh;
  step.multiplier = nu;
  step.iterations = it;
  fill_residuals(sub, step);
  return step;
}

StepConditionReport verify_step_conditions(const CubicSubproblem& sub, const Vector& s) {
  StepConditionReport r;
  const double sn = s.norm();
  const double sg = s.dot(sub.g);
  const double sbs = s.dot(sub.b * s);
  const double cube = sub.sigma * sn * sn * sn;
  const double term_scale = std::abs(sg) + std::abs(sbs) + cube;

  r.identity_residual = std::abs(sg + sbs + cube);
  r.identity_holds = r.identity_residual <= 1e-8 * term_scale;
  r.curvature_term = sbs + cube;
  r.curvature_holds = r.curvature_term >= -1e-10 * std::max(1.0, term_scale);
  r.grad_norm = model_gradient(sub, s).norm();
  r.termination_holds = r.grad_norm <= sub.kappa_theta * std::min(1.0, sn) * sub.g.norm();
  r.decrease = -model_value(sub, s);
  r.decrease_bound_holds = r.decrease >= cube / 6.0 - 1e-10 * std::max(1.0, term_scale);
  return r;
}

}  // namespace randopt
