#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "randopt/arc.hpp"
#include "randopt/diagnostics.hpp"
#include "randopt/linesearch.hpp"
#include "randopt/oracles.hpp"
#include "randopt/problems.hpp"
#include "randopt/theory.hpp"

namespace randopt {

enum class AlgorithmKind { ls_steepest, ls_general, ls_fully_linear, arc, arc_fully_quadratic };
enum class OracleKind { synthetic, subsampled, exact, finite_difference };

std::string to_string(AlgorithmKind a);
AlgorithmKind algorithm_from_string(const std::string& s);
std::string to_string(OracleKind o);
OracleKind oracle_kind_from_string(const std::string& s);

struct ProblemSpec {
  std::string name = "quadratic";  // quadratic | pseudo_huber | rosenbrock | finite_sum
  Eigen::Index dim = 2;
  double condition = 10.0;
  std::uint64_t seed = 0;
  double box_lo = -2.0;
  double box_hi = 2.0;
  std::vector<double> x0;  // empty: problem default
  std::size_t terms = 10;
  double heterogeneity = 1.0;
};

struct ExperimentSpec {
  ProblemSpec problem;
  AlgorithmKind algorithm = AlgorithmKind::ls_steepest;
  LsConfig ls;
  ArcConfig arc;
  std::vector<double> transform_diagonal;  // ls_general: T = diag(...)
  std::optional<ConvexityClass> regime;    // line search: override the problem's class
  OracleConfig oracle;
  OracleKind oracle_kind = OracleKind::synthetic;

  std::vector<double> p_grid{0.8};
  std::vector<double> eps_grid{1e-3};
  std::size_t replications = 200;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
  std::size_t replication = 0;  // replication index used by a single run

  void validate() const;
};

struct Problem {
  ObjectivePtr objective;
  FiniteSumPtr finite_sum;  // set for finite_sum problems
  Vector x0;
};

Problem build_problem(const ProblemSpec& spec);

struct ReplicationResult {
  std::size_t replication = 0;
  std::uint64_t stream_key = 0;
  std::optional<std::size_t> hitting_index;
  std::size_t shrink_steps = 0;
  ProcessDiagnostics process;
  LemmaReport lemmas;
  std::optional<Trace> trace;  // kept on request only

  bool ok() const { return process.ok() && lemmas.ok(); }
};

struct HittingTimeStats {
  double p = 0.0;
  double eps = 0.0;
  std::size_t replications = 0;
  std::size_t hits = 0;
  std::size_t nonhits = 0;
  double mean = 0.0;     // over hits; NaN without hits
  double sd = 0.0;       // NaN with fewer than two hits
  double ci_half = 0.0;  // 1.96 sd / sqrt(hits); NaN with fewer than two hits
  double bound = 0.0;

  // Process averages over hitting replications.
  double mean_below_c = 0.0;
  double ci_below_c = 0.0;
  double mean_m1 = 0.0;
  double ci_m1 = 0.0;
  double mean_m2 = 0.0;
  double ci_m2 = 0.0;
  std::size_t warnings = 0;
};

/// Everything derived once from a spec: the objective, start point, regime and
/// analysis constants.
class Experiment {
 public:
  explicit Experiment(ExperimentSpec spec);

  const ExperimentSpec& spec() const { return spec_; }
  const Objective& objective() const { return *problem_.objective; }
  const Problem& problem() const { return problem_; }
  Regime regime() const { return regime_; }
  const TheoryConstants& constants() const { return constants_; }
  double C() const;
  double bound(double p, double eps) const;

  /// Stream for replication `rep` of grid cell `cell` (cells are p-major).
  RngStream stream(std::size_t cell, std::size_t rep) const;

  /// One realization with all per-trace checks.
  ReplicationResult run_replication(double p, double eps, std::size_t cell, std::size_t rep,
                                    bool keep_trace = false) const;

  /// All replications of one cell, ordered by replication index.
  std::vector<ReplicationResult> run_cell(double p, double eps, std::size_t cell) const;

 private:
  Trace run_algorithm(double p, double eps, RngStream& rng) const;

  ExperimentSpec spec_;
  Problem problem_;
  Regime regime_ = Regime::ls_nonconvex;
  TheoryConstants constants_;
  std::optional<DirectionTransform> transform_;
};

HittingTimeStats summarize(double p, double eps, double bound,
                           const std::vector<ReplicationResult>& results);

/// Runs every (p, eps) cell; throws LemmaViolation naming the replication and
/// stream key on the first trace-level violation.
std::vector<HittingTimeStats> run_monte_carlo(const ExperimentSpec& spec);

inline constexpr const char* kSummaryCsvHeader = "p,eps,replications,mean_N,std_N,ci_half,bound,nonhits";

void write_summary_csv(std::ostream& out, const std::vector<HittingTimeStats>& rows);

struct VerifyReport {
  std::size_t runs = 0;
  std::size_t violations = 0;
  std::size_t warnings = 0;
  std::vector<std::string> messages;  // first few violations, with their streams
  std::vector<HittingTimeStats> cells;
  std::size_t expectation_failures = 0;
  SolverAudit audit;

  bool ok() const { return violations == 0 && expectation_failures == 0 && audit.ok(); }
};

/// Runs every cell with the full per-trace suite, the cell-level expectation
/// checks (bound, process averages) and a cubic-solver audit.
VerifyReport verify_experiment(const ExperimentSpec& spec, std::size_t audit_problems = 100);

void write_verify_report(std::ostream& out, const VerifyReport& report);

}  // namespace randopt
