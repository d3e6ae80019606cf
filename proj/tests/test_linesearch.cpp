#include <gtest/gtest.h>

#include <cmath>

#include "randopt/linesearch.hpp"
#include "randopt/theory.hpp"

using namespace randopt;

namespace {

OracleConfig exact_cfg() {
  OracleConfig c;
  c.p = 1.0;
  c.eta = 0.0;
  return c;
}

StoppingRule grad_rule(double eps, std::size_t cap = 100000) {
  StoppingRule s;
  s.eps = eps;
  s.max_iters = cap;
  return s;
}

}  // namespace

TEST(Armijo, HandCases) {
  const Vector g = Vector::Constant(1, 1.0);
  // f = x^2/2 at x = 1, step to 0.5: 0.125 <= 0.5 - 0.25.
  EXPECT_TRUE(armijo_check(0.5, 0.125, 0.5, 0.5, g));
  EXPECT_FALSE(armijo_check(0.5, 0.5, 0.5, 0.5, g));
  EXPECT_TRUE(armijo_check(0.5, 0.5, 0.5, 0.5, Vector::Zero(1)));
  const Vector d = -2.0 * g;
  EXPECT_TRUE(armijo_check(1.0, 0.5, 0.5, 0.5, g, &d));   // 0.5 <= 1 - 0.5
  EXPECT_FALSE(armijo_check(1.0, 0.6, 0.5, 0.5, g, &d));
}

TEST(LineSearch, AlreadyConverged) {
  auto f = make_quadratic(2, 5.0, 1);
  const Vector x0 = Vector::Constant(2, 0.1);
  SyntheticLinearOracle oracle(exact_cfg());
  RngStream rng(1);
  const auto tr = run_linesearch(*f, x0, oracle, LsConfig{}, grad_rule(f->gradient(x0).norm()), rng);
  ASSERT_TRUE(tr.hitting_index);
  EXPECT_EQ(*tr.hitting_index, 0u);
  EXPECT_TRUE(tr.records.empty());
}

TEST(LineSearch, AccurateSmallStepsSucceed) {
  // f = x^2/2, L = 1. C = (1 - theta) / (0.5 L + kappa) for any kappa.
  auto f = make_quadratic(1, 1.0, 0);
  for (double kappa : {0.1, 1.0, 3.0}) {
    OracleConfig oc = exact_cfg();
    oc.kappa = kappa;
    SyntheticLinearOracle oracle(oc);
    LsConfig cfg;
    cfg.alpha0 = 2.0;
    cfg.alpha_max = 4.0;
    TheoryConstants tc;
    tc.lip_grad = 1.0;
    tc.kappa = kappa;
    const double C = compute_C(Regime::ls_nonconvex, tc);
    RngStream rng(2);
    const auto tr = run_linesearch(*f, Vector::Constant(1, 3.0), oracle, cfg, grad_rule(1e-8), rng);
    ASSERT_TRUE(tr.hitting_index);
    for (const auto& r : tr.records) {
      EXPECT_TRUE(*r.is_true);
      if (r.alpha <= C) { EXPECT_TRUE(r.is_successful) << "k=" << r.k; }
    }
  }
}

TEST(LineSearch, StepSizeUpdateRule) {
  auto f = make_quadratic(3, 20.0, 4);
  OracleConfig oc;
  oc.p = 0.6;
  SyntheticLinearOracle oracle(oc);
  LsConfig cfg;
  RngStream rng(3);
  const auto tr = run_linesearch(*f, Vector::Ones(3), oracle, cfg, grad_rule(1e-4), rng);
  ASSERT_TRUE(tr.hitting_index);
  EXPECT_EQ(tr.records.size(), *tr.hitting_index);
  for (std::size_t i = 0; i + 1 < tr.records.size(); ++i) {
    const auto& r = tr.records[i];
    const double next = r.is_successful ? std::min(cfg.alpha_max, r.alpha / cfg.gamma) : r.alpha * cfg.gamma;
    EXPECT_DOUBLE_EQ(tr.records[i + 1].alpha, next);
    if (r.is_successful) { EXPECT_LE(tr.records[i + 1].f, r.f); }
    else EXPECT_EQ(tr.records[i + 1].f, r.f);
  }
}

TEST(LineSearch, PseudoHuberExactMonotone) {
  auto f = make_pseudo_huber(2);
  SyntheticLinearOracle oracle(exact_cfg());
  RngStream rng(4);
  const auto tr = run_linesearch(*f, Vector::Constant(2, 3.0), oracle, LsConfig{}, grad_rule(1e-6), rng);
  ASSERT_TRUE(tr.hitting_index);
  for (std::size_t i = 1; i < tr.records.size(); ++i) EXPECT_LE(tr.records[i].f, tr.records[i - 1].f);
}

TEST(LineSearch, MatchesClassicalBacktracking) {
  // Exact models with the model held on failure is plain Armijo backtracking
  // with step growth after success.
  auto f = make_quadratic(3, 10.0, 5);
  LsConfig cfg;
  cfg.hold_model_on_failure = true;
  SyntheticLinearOracle oracle(exact_cfg());
  RngStream rng(5);
  const Vector x0 = Vector::Constant(3, 1.5);
  const auto tr = run_linesearch(*f, x0, oracle, cfg, grad_rule(1e-6), rng);

  Vector x = x0;
  double alpha = cfg.alpha0;
  std::size_t k = 0;
  while (f->gradient(x).norm() > 1e-6) {
    const Vector g = f->gradient(x);
    const Vector trial = x - alpha * g;
    if (f->value(trial) <= f->value(x) - alpha * cfg.theta * g.squaredNorm()) {
      x = trial;
      alpha = std::min(cfg.alpha_max, 2.0 * alpha);
    } else {
      alpha *= 0.5;
    }
    ++k;
  }
  ASSERT_TRUE(tr.hitting_index);
  EXPECT_EQ(*tr.hitting_index, k);
  EXPECT_EQ((tr.x_final - x).norm(), 0.0);
}

TEST(LineSearch, CapWithoutHit) {
  auto f = make_quadratic(2, 10.0, 1);
  SyntheticLinearOracle oracle(exact_cfg());
  RngStream rng(6);
  const auto tr = run_linesearch(*f, Vector::Ones(2), oracle, LsConfig{}, grad_rule(1e-12, 5), rng);
  EXPECT_FALSE(tr.hitting_index);
  EXPECT_TRUE(tr.capped);
  EXPECT_EQ(tr.records.size(), 5u);
}

TEST(GeneralDirection, Constants) {
  Matrix t = Matrix::Zero(2, 2);
  t.diagonal() << 1.0, 4.0;
  const auto dt = make_general_direction(t);
  EXPECT_DOUBLE_EQ(dt.beta(), 0.25);
  EXPECT_DOUBLE_EQ(dt.kappa1(), 1.0);
  EXPECT_DOUBLE_EQ(dt.kappa2(), 4.0);
  RngStream rng(7);
  for (int i = 0; i < 100; ++i) {
    const Vector g = rng.normal_vector(2);
    const Vector d = dt.direction(g, i);
    EXPECT_GE(-d.dot(g), dt.beta() * d.norm() * g.norm() - 1e-12);
    EXPECT_GE(d.norm(), dt.kappa1() * g.norm() - 1e-12);
    EXPECT_LE(d.norm(), dt.kappa2() * g.norm() + 1e-12);
  }
  EXPECT_THROW(make_general_direction(Matrix(Matrix::Identity(2, 2) * -1.0)), InvalidArgument);
}

TEST(GeneralDirection, IdentityReducesToSteepest) {
  TheoryConstants tc;
  tc.lip_grad = 3.0;
  tc.kappa = 0.7;
  EXPECT_DOUBLE_EQ(compute_C(Regime::ls_general, tc), compute_C(Regime::ls_nonconvex, tc));

  auto f = make_quadratic(2, 5.0, 3);
  SyntheticLinearOracle oracle(exact_cfg());
  LsConfig steep;
  LsConfig gen;
  gen.variant = DirectionVariant::general;
  gen.transform = make_general_direction(Matrix(Matrix::Identity(2, 2)));
  RngStream r1(8), r2(8);
  const auto a = run_linesearch(*f, Vector::Ones(2), oracle, steep, grad_rule(1e-6), r1);
  const auto b = run_linesearch(*f, Vector::Ones(2), oracle, gen, grad_rule(1e-6), r2);
  EXPECT_EQ(a.hitting_index, b.hitting_index);
  EXPECT_EQ((a.x_final - b.x_final).norm(), 0.0);
}

TEST(GeneralDirection, ScaledRunConverges) {
  auto f = make_quadratic(2, 10.0, 2);
  OracleConfig oc;
  oc.p = 0.8;
  SyntheticLinearOracle oracle(oc);
  LsConfig cfg;
  cfg.variant = DirectionVariant::general;
  Matrix t = Matrix::Zero(2, 2);
  t.diagonal() << 1.0, 4.0;
  cfg.transform = make_general_direction(t);
  cfg.alpha0 = 0.125;
  cfg.alpha_max = 0.25;
  RngStream rng(9);
  const auto tr = run_linesearch(*f, Vector::Ones(2), oracle, cfg, grad_rule(1e-5), rng);
  EXPECT_TRUE(tr.hitting_index);
}

TEST(FullyLinearLs, InitialShrinkCount) {
  auto f = make_quadratic(2, 4.0, 1);
  const Vector x0 = Vector::Ones(2);
  const double g0 = f->gradient(x0).norm();
  FullyLinearOracle oracle(exact_cfg(), BallModelKind::exact);
  LsConfig cfg;
  cfg.kappa_delta = 2.0;
  cfg.xi0 = 1e3;
  RngStream rng(10);
  const auto tr = run_ls_fully_linear(*f, x0, oracle, cfg, grad_rule(1e-6), rng);
  ASSERT_TRUE(tr.hitting_index);
  const auto expected = static_cast<std::size_t>(std::ceil(std::log(cfg.kappa_delta * cfg.xi0 / g0) / std::log(2.0)));
  std::size_t shrinks = 0;
  while (shrinks < tr.records.size() && tr.records[shrinks].is_shrink) ++shrinks;
  EXPECT_EQ(shrinks, expected);
  EXPECT_DOUBLE_EQ(*tr.records.front().xi, cfg.xi0);
  EXPECT_DOUBLE_EQ(*tr.records[1].xi, cfg.xi0 / 2.0);
  for (std::size_t i = 0; i < shrinks; ++i) EXPECT_EQ(tr.records[i].f, tr.records.front().f);
  for (std::size_t i = 1; i < tr.records.size(); ++i) EXPECT_LE(*tr.records[i].xi, *tr.records[i - 1].xi);
}

TEST(LsConfig, Validation) {
  LsConfig c;
  c.gamma = 1.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = LsConfig{};
  c.alpha0 = 2.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = LsConfig{};
  c.variant = DirectionVariant::general;
  EXPECT_THROW(c.validate(), InvalidArgument);
}
