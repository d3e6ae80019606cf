#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "randopt/diagnostics.hpp"
#include "randopt/experiment.hpp"

using namespace randopt;

namespace {

Trace empty_trace() {
  Trace t;
  t.algorithm = "ls_steepest";
  t.hitting_index = 0;
  t.alpha0 = 0.5;
  t.alpha_max = 1.0;
  t.gamma = 0.5;
  return t;
}

IterationRecord rec(std::size_t k, double alpha, bool tru, bool suc) {
  IterationRecord r;
  r.k = k;
  r.alpha = alpha;
  r.is_true = tru;
  r.is_successful = suc;
  return r;
}

const auto unit_h = [](double a) { return a; };

struct Counts {
  std::size_t n1 = 0, m1 = 0, n2 = 0, m2 = 0, n3 = 0, m3 = 0;
};

// Recount from the CSV text alone: alpha >= C_eff is lattice level <= c.
Counts recount_csv(const std::string& csv, double alpha0, double gamma, int c) {
  Counts n;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    const int lev = static_cast<int>(std::lround(std::log(std::stod(f[1]) / alpha0) / std::log(gamma)));
    const bool tru = f[6] == "1", suc = f[7] == "1";
    const bool big = lev <= c, strict = lev < c;
    n.n1 += big && !tru && suc;
    n.m1 += big && !tru;
    n.n2 += big && tru && suc;
    n.m2 += big && tru;
    n.n3 += strict && tru && !suc;
    n.m3 += strict && !suc;
  }
  return n;
}

}  // namespace

TEST(Diagnose, EmptyTrace) {
  const auto d = diagnose_trace(empty_trace(), 0.2, 1.0, unit_h);
  EXPECT_EQ(d.iterations, 0u);
  EXPECT_EQ(d.n1 + d.m1 + d.n2 + d.m2 + d.n3 + d.m3, 0u);
  EXPECT_TRUE(d.ok());
  EXPECT_DOUBLE_EQ(d.C_eff, 0.125);
  EXPECT_EQ(d.c_level, 2);
}

TEST(Diagnose, HandCounts) {
  auto t = empty_trace();
  // Lattice: 0.5 (level 0), 0.25 (1), 0.125 (2); C = 0.2 snaps to 0.125.
  t.records = {rec(0, 0.5, true, false), rec(1, 0.25, false, true), rec(2, 0.5, true, true),
               rec(3, 1.0, true, false), rec(4, 0.5, false, false), rec(5, 0.25, true, false),
               rec(6, 0.125, true, true), rec(7, 0.25, true, true)};
  t.hitting_index = 8;
  const auto d = diagnose_trace(t, 0.2, 100.0, unit_h);
  EXPECT_EQ(d.n1, 1u);
  EXPECT_EQ(d.m1, 2u);
  EXPECT_EQ(d.n2, 3u);
  EXPECT_EQ(d.m2, 6u);
  EXPECT_EQ(d.n3, 3u);
  EXPECT_EQ(d.m3, 4u);
  EXPECT_EQ(d.small_successes, 1u);
  EXPECT_TRUE(d.ok());
}

TEST(Diagnose, DetectsTooManySmallSuccesses) {
  auto t = empty_trace();
  // C_eff = 0.125; successes with alpha <= C come straight from alpha0 > C.
  t.records = {rec(0, 0.125, true, true), rec(1, 0.125, true, true), rec(2, 0.125, true, true)};
  t.hitting_index = 3;
  const auto d = diagnose_trace(t, 0.2, 100.0, unit_h);
  EXPECT_FALSE(d.success_fraction_ok);
  EXPECT_FALSE(d.ok());
}

TEST(Diagnose, DetectsCapOnTrueSuccesses) {
  auto t = empty_trace();
  t.records = {rec(0, 0.5, true, true), rec(1, 1.0, true, true), rec(2, 1.0, true, true)};
  t.hitting_index = 3;
  // F / h(C_eff) = 0.25 / 0.125 = 2 < 3.
  const auto d = diagnose_trace(t, 0.2, 0.25, unit_h);
  EXPECT_FALSE(d.true_success_cap_ok);
}

TEST(Diagnose, Preconditions) {
  auto t = empty_trace();
  EXPECT_THROW(diagnose_trace(t, 0.6, 1.0, unit_h), ConfigError);  // C >= gamma alpha_max
  t.hitting_index.reset();
  EXPECT_THROW(diagnose_trace(t, 0.2, 1.0, unit_h), InvalidArgument);
  t.capped = true;
  t.records = {rec(0, 0.3, true, true)};
  EXPECT_THROW(diagnose_trace(t, 0.2, 1.0, unit_h), ConfigError);  // off-lattice step
}

TEST(Diagnose, ExactModelsHaveNoFalseIterations) {
  ExperimentSpec spec;
  spec.problem.name = "quadratic";
  spec.problem.dim = 3;
  spec.ls.alpha0 = 0.5;
  spec.ls.alpha_max = 1.0;
  spec.oracle.p = 1.0;
  spec.oracle.eta = 0.0;
  Experiment ex(spec);
  ASSERT_GT(spec.ls.alpha0, ex.C());
  const auto r = ex.run_replication(1.0, 1e-4, 0, 0);
  EXPECT_EQ(r.process.m1, 0u);
  EXPECT_EQ(r.process.n1, 0u);
  EXPECT_TRUE(r.ok());
}

TEST(Diagnose, RosenbrockCountsMatchCsvRecount) {
  ExperimentSpec spec;
  spec.problem.name = "rosenbrock";
  spec.problem.dim = 2;
  spec.oracle.p = 0.7;
  spec.master_seed = 77;
  Experiment ex(spec);
  const auto r = ex.run_replication(0.7, 1e-2, 0, 3, true);
  ASSERT_TRUE(r.trace);
  ASSERT_TRUE(r.hitting_index);
  std::ostringstream csv;
  write_trace_csv(csv, *r.trace);
  const auto n = recount_csv(csv.str(), spec.ls.alpha0, spec.ls.gamma, r.process.c_level);
  EXPECT_EQ(n.n1, r.process.n1);
  EXPECT_EQ(n.m1, r.process.m1);
  EXPECT_EQ(n.n2, r.process.n2);
  EXPECT_EQ(n.m2, r.process.m2);
  EXPECT_EQ(n.n3, r.process.n3);
  EXPECT_EQ(n.m3, r.process.m3);
  EXPECT_GT(r.process.m1, 0u);
  EXPECT_TRUE(r.ok());
}

TEST(LemmaChecks, FlagsUnsuccessfulAccurateSmallStep) {
  auto t = empty_trace();
  t.records = {rec(0, 0.5, true, true), rec(1, 1.0, true, false), rec(2, 0.5, true, false),
               rec(3, 0.25, true, false)};
  for (auto& r : t.records) {
    r.f = 1.0;
    r.f_trial = r.is_successful ? 0.5 : 2.0;
    r.grad_norm = r.model_grad_norm = 1.0;
  }
  t.records[1].f = t.records[2].f = t.records[3].f = 0.5;
  t.hitting_index = 4;
  LemmaCheckContext ctx;
  ctx.constants.lip_grad = 1.0;
  ctx.constants.kappa = 1.0;  // C = 1/3
  const auto rep = check_ls_lemmas(t, ctx);
  EXPECT_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations) found |= v.find("iteration 3") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(SolverAuditTest, SmallBatchPasses) {
  const auto a = audit_cubic_solver(30, 5);
  EXPECT_EQ(a.problems, 30u);
  EXPECT_TRUE(a.ok());
}
