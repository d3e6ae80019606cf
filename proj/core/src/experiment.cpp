#include "randopt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

namespace randopt {

std::string to_string(AlgorithmKind a) {
  switch (a) {
    case AlgorithmKind::ls_steepest: return "ls_steepest";
    case AlgorithmKind::ls_general: return "ls_general";
    case AlgorithmKind::ls_fully_linear: return "ls_fully_linear";
    case AlgorithmKind::arc: return "arc";
    case AlgorithmKind::arc_fully_quadratic: return "arc_fully_quadratic";
  }
  return "unknown";
}

AlgorithmKind algorithm_from_string(const std::string& s) {
  for (auto a : {AlgorithmKind::ls_steepest, AlgorithmKind::ls_general, AlgorithmKind::ls_fully_linear,
                 AlgorithmKind::arc, AlgorithmKind::arc_fully_quadratic})
    if (to_string(a) == s) return a;
  throw ConfigError("unknown algorithm '" + s + "'");
}

std::string to_string(OracleKind o) {
  switch (o) {
    case OracleKind::synthetic: return "synthetic";
    case OracleKind::subsampled: return "subsampled";
    case OracleKind::exact: return "exact";
    case OracleKind::finite_difference: return "finite_difference";
  }
  return "unknown";
}

OracleKind oracle_kind_from_string(const std::string& s) {
  for (auto o : {OracleKind::synthetic, OracleKind::subsampled, OracleKind::exact, OracleKind::finite_difference})
    if (to_string(o) == s) return o;
  throw ConfigError("unknown oracle kind '" + s + "'");
}

namespace {

bool is_arc(AlgorithmKind a) { return a == AlgorithmKind::arc || a == AlgorithmKind::arc_fully_quadratic; }

// Rethrow argument errors from the component validators as configuration errors.
template <class F>
void as_config(F&& f) {
  try {
    f();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

bool on_lattice(double ratio, double gamma) {
  const double raw = std::log(ratio) / std::log(gamma);
  return std::abs(raw - std::round(raw)) <= 1e-6;
}

}  // namespace

void ExperimentSpec::validate() const {
  as_config([&] {
    if (is_arc(algorithm)) arc.validate();
    else ls.validate();
    OracleConfig probe = oracle;
    for (double p : p_grid) {
      probe.p = p;
      probe.validate();
    }
  });
  if (p_grid.empty() || eps_grid.empty()) throw ConfigError("grid.p and grid.eps must be nonempty");
  for (double p : p_grid)
    if (!(p > 0.5 && p <= 1.0)) throw ConfigError("grid.p entries must lie in (1/2, 1]");
  for (double e : eps_grid)
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("grid.eps entries must be positive");
  if (replications == 0) throw ConfigError("mc.replications must be positive");
  if (replication >= replications) throw ConfigError("run.replication must be below mc.replications");
  if (algorithm == AlgorithmKind::ls_general && transform_diagonal.empty())
    throw ConfigError("ls_general needs algo.transform");
  if (oracle_kind == OracleKind::subsampled && (is_arc(algorithm) || problem.name != "finite_sum"))
    throw ConfigError("the subsampled oracle needs a line-search algorithm on the finite_sum problem");
  if (regime && is_arc(algorithm)) throw ConfigError("algo.regime applies to line search only");
}

Problem build_problem(const ProblemSpec& spec) {
  Problem pr;
  Vector x0;
  as_config([&] {
    if (spec.name == "quadratic") {
      pr.objective = make_quadratic(spec.dim, spec.condition, spec.seed);
      x0 = Vector::Ones(spec.dim);
    } else if (spec.name == "pseudo_huber") {
      pr.objective = make_pseudo_huber(spec.dim);
      x0 = Vector::Constant(spec.dim, 3.0);
    } else if (spec.name == "rosenbrock") {
      pr.objective = make_rosenbrock(spec.dim, spec.box_lo, spec.box_hi);
      x0.resize(spec.dim);
      for (Eigen::Index i = 0; i < spec.dim; ++i) x0(i) = i % 2 == 0 ? -1.2 : 1.0;
    } else if (spec.name == "finite_sum") {
      pr.finite_sum = make_finite_sum(spec.dim, spec.terms, spec.heterogeneity, spec.seed);
      pr.objective = pr.finite_sum;
      x0 = Vector::Constant(spec.dim, 3.0);
    } else {
      throw ConfigError("unknown problem '" + spec.name + "'");
    }
  });
  if (!spec.x0.empty()) {
    if (static_cast<Eigen::Index>(spec.x0.size()) != spec.dim)
      throw ConfigError("problem.x0 must have problem.dim entries");
    x0 = Eigen::Map<const Vector>(spec.x0.data(), spec.dim);
  }
  const auto& dom = pr.objective->constants().domain;
  if (dom && !dom->contains(x0)) throw ConfigError("problem.x0 lies outside the domain box");
  pr.x0 = x0;
  return pr;
}

Experiment::Experiment(ExperimentSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  problem_ = build_problem(spec_.problem);
  const Objective& obj = *problem_.objective;
  const auto& oc = obj.constants();

  if (spec_.algorithm == AlgorithmKind::ls_general) {
    const auto& d = spec_.transform_diagonal;
    if (static_cast<Eigen::Index>(d.size()) != obj.dim())
      throw ConfigError("algo.transform must have problem.dim entries");
    as_config([&] { transform_ = make_general_direction(Matrix(Eigen::Map<const Vector>(d.data(), obj.dim()).asDiagonal())); });
    spec_.ls.variant = DirectionVariant::general;
    spec_.ls.transform = transform_;
  }

  const ConvexityClass cls = spec_.regime.value_or(oc.convexity);
  if (is_arc(spec_.algorithm)) regime_ = Regime::arc;
  else if (spec_.algorithm == AlgorithmKind::ls_general) regime_ = Regime::ls_general;
  else if (cls == ConvexityClass::nonconvex) regime_ = Regime::ls_nonconvex;
  else if (cls == ConvexityClass::convex) regime_ = Regime::ls_convex;
  else regime_ = Regime::ls_strongly_convex;

  TheoryConstants& c = constants_;
  c.lip_grad = oc.lip_grad;
  c.lip_hess = oc.lip_hess.value_or(0.0);
  c.mu = oc.strong_mu;
  c.diameter = obj.level_diameter(problem_.x0).value_or(0.0);
  c.initial_gap = obj.value(problem_.x0) - oc.f_star;
  c.kappa = spec_.oracle.kappa;
  c.kappa_g = spec_.oracle.kappa_g;
  c.kappa_h = spec_.oracle.kappa_h;
  if (is_arc(spec_.algorithm)) {
    const ArcConfig& a = spec_.arc;
    c.theta = a.theta;
    c.gamma = a.gamma;
    c.alpha0 = 1.0 / a.sigma0;
    c.alpha_max = 1.0 / a.sigma_min;
    c.kappa_theta = a.kappa_theta;
    c.sigma_min = a.sigma_min;
    if (!on_lattice(a.sigma0 / a.sigma_min, a.gamma))
      throw ConfigError("sigma0 / sigma_min must be a power of 1 / gamma");
  } else {
    const LsConfig& l = spec_.ls;
    c.theta = l.theta;
    c.gamma = l.gamma;
    c.alpha0 = l.alpha0;
    c.alpha_max = l.alpha_max;
    c.beta = l.beta();
    c.kappa1 = l.kappa1();
    c.kappa2 = l.kappa2();
    if (!on_lattice(l.alpha_max / l.alpha0, l.gamma))
      throw ConfigError("alpha_max / alpha0 must be a power of 1 / gamma");
  }
  if (regime_ == Regime::ls_convex && !(c.diameter > 0.0))
    throw ConfigError("the convex regime needs a problem with a known level-set diameter");
  if (regime_ == Regime::ls_strongly_convex && !(c.mu > 0.0))
    throw ConfigError("the strongly convex regime needs a strongly convex problem");

  const double cc = compute_C(regime_, c);
  if (!(cc < c.gamma * c.alpha_max)) {
    std::ostringstream msg;
    msg << "C = " << cc << " must be below gamma * alpha_max = " << c.gamma * c.alpha_max;
    throw ConfigError(msg.str());
  }
  compute_h(regime_, c, spec_.eps_grid.front());
}

double Experiment::C() const { return compute_C(regime_, constants_); }

double Experiment::bound(double p, double eps) const { return theoretical_bound(regime_, constants_, p, eps); }

RngStream Experiment::stream(std::size_t cell, std::size_t rep) const {
  return RngStream(spec_.master_seed ^ mix64(spec_.oracle.seed)).split(cell).split(rep);
}

Trace Experiment::run_algorithm(double p, double eps, RngStream& rng) const {
  OracleConfig ocfg = spec_.oracle;
  ocfg.p = p;
  const Objective& obj = *problem_.objective;
  const Vector& x0 = problem_.x0;
  const bool fd = spec_.oracle_kind == OracleKind::finite_difference;

  if (is_arc(spec_.algorithm)) {
    std::unique_ptr<SecondOrderOracle> oracle;
    if (spec_.oracle_kind == OracleKind::synthetic) oracle = std::make_unique<SyntheticQuadraticOracle>(ocfg);
    else oracle = std::make_unique<FullyQuadraticOracle>(ocfg, fd ? BallModelKind::finite_difference : BallModelKind::exact);
    if (spec_.algorithm == AlgorithmKind::arc_fully_quadratic)
      return run_arc_fully_quadratic(obj, x0, *oracle, spec_.arc, eps, rng);
    return run_arc(obj, x0, *oracle, spec_.arc, eps, rng);
  }

  std::unique_ptr<FirstOrderOracle> oracle;
  switch (spec_.oracle_kind) {
    case OracleKind::synthetic: oracle = std::make_unique<SyntheticLinearOracle>(ocfg); break;
    case OracleKind::subsampled: oracle = std::make_unique<SubsampledLinearOracle>(problem_.finite_sum, ocfg); break;
    case OracleKind::exact: oracle = std::make_unique<FullyLinearOracle>(ocfg, BallModelKind::exact); break;
    case OracleKind::finite_difference:
      oracle = std::make_unique<FullyLinearOracle>(ocfg, BallModelKind::finite_difference);
      break;
  }
  StoppingRule stop;
  stop.eps = eps;
  stop.event = regime_ == Regime::ls_nonconvex || regime_ == Regime::ls_general ? HittingEvent::gradient_norm
                                                                                 : HittingEvent::function_gap;
  if (spec_.algorithm == AlgorithmKind::ls_fully_linear)
    return run_ls_fully_linear(obj, x0, *oracle, spec_.ls, stop, rng);
  return run_linesearch(obj, x0, *oracle, spec_.ls, stop, rng);
}

ReplicationResult Experiment::run_replication(double p, double eps, std::size_t cell, std::size_t rep,
                                              bool keep_trace) const {
  RngStream rng = stream(cell, rep);
  ReplicationResult res;
  res.replication = rep;
  res.stream_key = rng.key();
  Trace tr = run_algorithm(p, eps, rng);
  res.hitting_index = tr.hitting_index;
  for (const auto& r : tr.records) res.shrink_steps += r.is_shrink ? 1 : 0;

  const double cc = C();
  res.process = diagnose_trace(tr, cc, compute_F_eps(regime_, constants_, eps), compute_h(regime_, constants_, eps));
  LemmaCheckContext ctx;
  ctx.regime = regime_;
  ctx.constants = constants_;
  ctx.f_star = objective().constants().f_star;
  ctx.eps = eps;
  ctx.constants_estimated = objective().constants().estimated;
  res.lemmas = regime_ == Regime::arc ? check_arc_lemmas(tr, ctx) : check_ls_lemmas(tr, ctx);
  if (keep_trace) res.trace = std::move(tr);
  return res;
}

std::vector<ReplicationResult> Experiment::run_cell(double p, double eps, std::size_t cell) const {
  const std::size_t n = spec_.replications;
  std::vector<ReplicationResult> out(n);
  unsigned workers = spec_.threads ? spec_.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = run_replication(p, eps, cell, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

namespace {

struct Moments {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
  double ci = std::numeric_limits<double>::quiet_NaN();
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  const std::size_t n = xs.size();
  if (n == 0) return m;
  double s = 0.0;
  for (double x : xs) s += x;
  m.mean = s / static_cast<double>(n);
  if (n < 2) return m;
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(n - 1));
  m.ci = 1.96 * m.sd / std::sqrt(static_cast<double>(n));
  return m;
}

}  // namespace

HittingTimeStats summarize(double p, double eps, double bound, const std::vector<ReplicationResult>& results) {
  HittingTimeStats st;
  st.p = p;
  st.eps = eps;
  st.bound = bound;
  st.replications = results.size();
  std::vector<double> ns, below, m1, m2;
  for (const auto& r : results) {
    st.warnings += r.lemmas.warnings.size();
    if (!r.hitting_index) {
      ++st.nonhits;
      continue;
    }
    ns.push_back(static_cast<double>(*r.hitting_index));
    below.push_back(static_cast<double>(r.process.below_c));
    m1.push_back(static_cast<double>(r.process.m1));
    m2.push_back(static_cast<double>(r.process.m2));
  }
  st.hits = ns.size();
  const Moments mn = moments(ns);
  st.mean = mn.mean;
  st.sd = mn.sd;
  st.ci_half = mn.ci;
  const Moments mb = moments(below), ma = moments(m1), mc = moments(m2);
  st.mean_below_c = mb.mean;
  st.ci_below_c = mb.ci;
  st.mean_m1 = ma.mean;
  st.ci_m1 = ma.ci;
  st.mean_m2 = mc.mean;
  st.ci_m2 = mc.ci;
  return st;
}

namespace {

std::string describe_failure(const ReplicationResult& r, double p, double eps) {
  std::ostringstream msg;
  msg << "p = " << format_number(p) << ", eps = " << format_number(eps) << ", replication " << r.replication
      << " (stream key 0x" << std::hex << r.stream_key << std::dec << "): ";
  if (!r.process.violations.empty()) msg << r.process.violations.front();
  else msg << r.lemmas.violations.front();
  return msg.str();
}

}  // namespace

std::vector<HittingTimeStats> run_monte_carlo(const ExperimentSpec& spec) {
  const Experiment exp(spec);
  std::vector<HittingTimeStats> rows;
  std::size_t cell = 0;
  for (double p : spec.p_grid) {
    for (double eps : spec.eps_grid) {
      const auto results = exp.run_cell(p, eps, cell);
      for (const auto& r : results)
        if (!r.ok()) throw LemmaViolation(describe_failure(r, p, eps));
      rows.push_back(summarize(p, eps, exp.bound(p, eps), results));
      ++cell;
    }
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<HittingTimeStats>& rows) {
  auto num = [](double v) { return std::isnan(v) ? std::string() : format_number(v); };
  out << kSummaryCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.p) << ',' << format_number(r.eps) << ',' << r.replications << ',' << num(r.mean) << ','
        << num(r.sd) << ',' << num(r.ci_half) << ',' << format_number(r.bound) << ',' << r.nonhits << '\n';
  }
}

namespace {

double or_zero(double v) { return std::isnan(v) ? 0.0 : v; }

}  // namespace

VerifyReport verify_experiment(const ExperimentSpec& spec, std::size_t audit_problems) {
  const Experiment exp(spec);
  VerifyReport rep;
  constexpr std::size_t kMaxMessages = 20;
  auto note = [&](const std::string& m) {
    if (rep.messages.size() < kMaxMessages) rep.messages.push_back(m);
  };

  std::size_t cell = 0;
  for (double p : spec.p_grid) {
    for (double eps : spec.eps_grid) {
      const auto results = exp.run_cell(p, eps, cell);
      for (const auto& r : results) {
        ++rep.runs;
        rep.warnings += r.lemmas.warnings.size();
        const std::size_t v = r.process.violations.size() + r.lemmas.violations.size();
        rep.violations += v;
        if (v) note(describe_failure(r, p, eps));
      }
      HittingTimeStats st = summarize(p, eps, exp.bound(p, eps), results);
      std::ostringstream where;
      where << "p = " << format_number(p) << ", eps = " << format_number(eps) << ": ";
      if (st.nonhits == 0 && st.mean + or_zero(st.ci_half) > st.bound) {
        ++rep.expectation_failures;
        note(where.str() + "mean hitting time exceeds the bound");
      }
      if (st.hits > 0 && st.mean_below_c - or_zero(st.ci_below_c) > (st.mean + or_zero(st.ci_half)) / (2.0 * p)) {
        ++rep.expectation_failures;
        note(where.str() + "mean count of small steps exceeds E(N) / (2p)");
      }
      if (st.hits > 0 && st.mean_m1 - or_zero(st.ci_m1) > (1.0 - p) / p * (st.mean_m2 + or_zero(st.ci_m2))) {
        ++rep.expectation_failures;
        note(where.str() + "mean M1 exceeds (1 - p) / p * mean M2");
      }
      rep.cells.push_back(st);
      ++cell;
    }
  }
  rep.audit = audit_cubic_solver(audit_problems, spec.master_seed);
  if (!rep.audit.ok()) note("cubic solver audit failed");
  return rep;
}

void write_verify_report(std::ostream& out, const VerifyReport& report) {
  out << "runs: " << report.runs << "\n";
  out << "trace violations: " << report.violations << "\n";
  out << "warnings (estimated constants): " << report.warnings << "\n";
  out << "expectation failures: " << report.expectation_failures << "\n";
  out << "solver audit: " << report.audit.problems << " problems, " << report.audit.identity_failures << " identity, "
      << report.audit.termination_failures << " termination, " << report.audit.decrease_failures << " decrease, "
      << report.audit.grid_failures << " grid failures\n";
  for (const auto& m : report.messages) out << "  " << m << "\n";
  out << (report.ok() ? "OK" : "FAILED") << "\n";
}

}  // namespace randopt
