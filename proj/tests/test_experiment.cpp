#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "randopt/config.hpp"
#include "randopt/experiment.hpp"

using namespace randopt;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.problem.name = "quadratic";
  s.problem.dim = 3;
  s.p_grid = {0.7, 1.0};
  s.eps_grid = {1e-2};
  s.replications = 8;
  s.master_seed = 5;
  s.threads = 1;
  return s;
}

std::string summary_csv(const ExperimentSpec& s) {
  std::ostringstream out;
  write_summary_csv(out, run_monte_carlo(s));
  return out.str();
}

}  // namespace

TEST(Experiment, Deterministic) {
  auto s = small_spec();
  const auto a = summary_csv(s);
  s.threads = 3;
  EXPECT_EQ(a, summary_csv(s));
  s.master_seed = 6;
  EXPECT_NE(a, summary_csv(s));
  EXPECT_EQ(a.rfind(kSummaryCsvHeader, 0), 0u);
}

TEST(Experiment, SingleReplicationHasNoInterval) {
  auto s = small_spec();
  s.replications = 1;
  s.p_grid = {0.8};
  const auto rows = run_monte_carlo(s);
  ASSERT_EQ(rows.size(), 1u);
  Experiment ex(s);
  const auto r = ex.run_replication(0.8, 1e-2, 0, 0);
  ASSERT_TRUE(r.hitting_index);
  EXPECT_DOUBLE_EQ(rows[0].mean, double(*r.hitting_index));
  EXPECT_TRUE(std::isnan(rows[0].ci_half));
  EXPECT_TRUE(std::isnan(rows[0].sd));
  std::ostringstream out;
  write_summary_csv(out, rows);
  EXPECT_NE(out.str().find(",,"), std::string::npos);
}

TEST(Experiment, ExactModelsGiveIdenticalHittingTimes) {
  auto s = small_spec();
  s.oracle.p = 1.0;
  s.oracle.eta = 0.0;
  Experiment ex(s);
  std::optional<std::size_t> first;
  for (std::size_t rep = 0; rep < 10; ++rep) {
    const auto r = ex.run_replication(1.0, 1e-3, 0, rep);
    ASSERT_TRUE(r.hitting_index);
    if (!first) first = r.hitting_index;
    EXPECT_EQ(*r.hitting_index, *first);
  }
}

TEST(Experiment, StreamsAreDistinct) {
  Experiment ex(small_spec());
  auto a = ex.stream(0, 0), b = ex.stream(0, 1), c = ex.stream(1, 0), d = ex.stream(0, 0);
  const auto va = a.next_u64();
  EXPECT_NE(va, b.next_u64());
  EXPECT_NE(va, c.next_u64());
  EXPECT_EQ(va, d.next_u64());
}

TEST(Experiment, MeanBelowBound) {
  auto s = small_spec();
  s.replications = 40;
  for (const auto& row : run_monte_carlo(s)) {
    EXPECT_EQ(row.nonhits, 0u);
    EXPECT_LE(row.mean + row.ci_half, row.bound);
  }
}

TEST(Experiment, RejectsBadSpecs) {
  auto s = small_spec();
  s.p_grid = {0.5};
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.replications = 0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.ls.alpha_max = 0.9;  // not on the lattice alpha0 * gamma^k
  EXPECT_THROW(Experiment{s}, ConfigError);
}

TEST(Experiment, AllAlgorithmsRun) {
  for (const char* text : {
           "problem.name = pseudo_huber\nalgo.name = ls_steepest\nproblem.x0 = 2, 2\n",
           "problem.name = quadratic\nalgo.name = ls_general\nalgo.transform = 1, 0.5\n",
           "problem.name = quadratic\nalgo.name = ls_fully_linear\noracle.kind = finite_difference\n",
           "problem.name = finite_sum\nalgo.name = ls_steepest\noracle.kind = subsampled\n",
           "problem.name = quadratic\nalgo.name = arc\n",
           "problem.name = pseudo_huber\nalgo.name = arc_fully_quadratic\noracle.kind = exact\n",
       }) {
    SCOPED_TRACE(text);
    const auto s = parse_config_string(text);
    Experiment ex(s);
    const auto r = ex.run_replication(s.oracle.p, 1e-2, 0, 0);
    EXPECT_TRUE(r.hitting_index);
    EXPECT_TRUE(r.ok());
  }
}

TEST(Config, ParsesKeys) {
  const auto s = parse_config_string(
      "# comment\n"
      "problem.name = rosenbrock\n"
      "problem.dim = 4\n"
      "algo.name = arc\n"
      "algo.sigma0 = 2\n"
      "oracle.corruption = zero_vector\n"
      "grid.p = 0.6, 0.9\n"
      "grid.eps = 1e-2,1e-3\n"
      "mc.replications = 7\n"
      "mc.master_seed = 99\n");
  EXPECT_EQ(s.problem.name, "rosenbrock");
  EXPECT_EQ(s.problem.dim, 4);
  EXPECT_EQ(s.algorithm, AlgorithmKind::arc);
  EXPECT_DOUBLE_EQ(s.arc.sigma0, 2.0);
  EXPECT_EQ(s.oracle.corruption, CorruptionMode::zero_vector);
  EXPECT_EQ(s.p_grid, (std::vector<double>{0.6, 0.9}));
  EXPECT_EQ(s.eps_grid, (std::vector<double>{1e-2, 1e-3}));
  EXPECT_EQ(s.replications, 7u);
  EXPECT_EQ(s.master_seed, 99u);
}

TEST(Config, DefaultsPGridToOracleP) {
  const auto s = parse_config_string("oracle.p = 0.65\n");
  EXPECT_EQ(s.p_grid, (std::vector<double>{0.65}));
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config_string("problem.bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_string("mc.replications = 2\nmc.replications = 3\n"), ConfigError);
  EXPECT_THROW(parse_config_string("mc.replications = two\n"), ConfigError);
  EXPECT_THROW(parse_config_string("no equals sign\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/file.cfg"), ConfigError);
  try {
    parse_config_string("\n\nfoo = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
}

TEST(Config, KeysAreDocumented) {
  for (const auto& [key, help] : config_keys()) {
    EXPECT_FALSE(key.empty());
    EXPECT_FALSE(help.empty());
  }
}
