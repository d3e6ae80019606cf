#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "randopt/theory.hpp"
#include "randopt/trace.hpp"

namespace randopt {

/// Counters of the step-size process over iterations k < N_eps (shrink steps excluded).
///
/// C_eff is C rounded down to the lattice alpha0 * gamma^c the step sizes live
/// on; "alpha >= C" and "alpha > C" below refer to C_eff.
struct ProcessDiagnostics {
  double C = 0.0;
  double C_eff = 0.0;
  int c_level = 0;  // C_eff = alpha0 * gamma^c_level
  double F_eps = 0.0;
  double h_C = 0.0;  // h(C_eff)

  std::size_t iterations = 0;
  std::size_t n1 = 0;  // false successful, alpha >= C
  std::size_t m1 = 0;  // false, alpha >= C
  std::size_t n2 = 0;  // true successful, alpha >= C
  std::size_t m2 = 0;  // true, alpha >= C
  std::size_t n3 = 0;  // true unsuccessful, alpha > C
  std::size_t m3 = 0;  // unsuccessful, alpha > C
  std::size_t small_successes = 0;  // successful, alpha <= C
  std::size_t below_c = 0;          // alpha <= C

  bool success_fraction_ok = true;
  bool true_success_cap_ok = true;
  bool true_count_ok = true;
  bool decrease_count_ok = true;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Counts N1..M3 and checks, on this realization:
///   prefix sums of successes with alpha <= C are at most (l + 1 + j0) / 2,
///   N2 <= F_eps / h(C), M2 <= N2 + M3, M3 <= N1 + N2 + log_gamma(C / alpha0).
/// j0 is the number of successes from alpha0 that can stay at or below C
/// (0 when alpha0 > C). Throws ConfigError if C >= gamma * alpha_max or a step
/// size leaves the alpha0 * gamma^k lattice, and InvalidArgument for a trace
/// that neither hit nor reached its cap.
ProcessDiagnostics diagnose_trace(const Trace& trace, double C, double F_eps,
                                  const std::function<double(double)>& h);

/// Fills IterationRecord::below_C using the same lattice classification.
void annotate_below_c(Trace& trace, double C);

struct LemmaCheckContext {
  Regime regime = Regime::ls_nonconvex;
  TheoryConstants constants;
  double f_star = 0.0;
  double eps = 1e-3;
  // Estimated L / L_H: the constant-dependent decrease lemmas become warnings.
  bool constants_estimated = false;
};

struct LemmaReport {
  std::size_t checked = 0;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
};

/// Line-search trace checks: accurate iterations with alpha <= C succeed, the
/// regime's per-iteration progress bound holds on accurate successful
/// iterations, f is nonincreasing and alpha follows the update rule.
LemmaReport check_ls_lemmas(const Trace& trace, const LemmaCheckContext& ctx);

/// ARC trace checks: model decrease >= sigma ||s||^3 / 6, successful decrease
/// >= theta sigma ||s||^3 / 6, the sigma update rule, and on accurate
/// iterations the sigma_c success threshold, the step-length lower bound, the
/// kappa_f progress bound and (gated runs) the fully-quadratic step bound.
LemmaReport check_arc_lemmas(const Trace& trace, const LemmaCheckContext& ctx);

struct SolverAudit {
  std::size_t problems = 0;
  std::size_t identity_failures = 0;
  std::size_t termination_failures = 0;
  std::size_t decrease_failures = 0;
  std::size_t grid_failures = 0;  // n = 2 only
  double max_identity_rel = 0.0;
  double worst_grid_gap = 0.0;  // model(s) - grid minimum, largest over n = 2 problems

  bool ok() const {
    return identity_failures == 0 && termination_failures == 0 && decrease_failures == 0 && grid_failures == 0;
  }
};

/// Solves `count` random cubic subproblems with dimensions cycling through
/// `dims` and checks the step identities, the termination condition with
/// kappa_theta and, for n = 2, global optimality against a 401 x 401 grid on
/// [-3, 3]^2.
SolverAudit audit_cubic_solver(std::size_t count, std::uint64_t seed,
                               const std::vector<int>& dims = {2, 5, 20}, double kappa_theta = 0.5);

}  // namespace randopt
