#include <gtest/gtest.h>

#include <cmath>

#include "randopt/cubic_solver.hpp"
#include "randopt/problems.hpp"
#include "randopt/rng.hpp"

using namespace randopt;

namespace {

CubicSubproblem make_sub(Vector g, Matrix b, double sigma) {
  CubicSubproblem sub;
  sub.g = std::move(g);
  sub.b = std::move(b);
  sub.sigma = sigma;
  return sub;
}

Vector e1(Eigen::Index n) { return Vector::Unit(n, 0); }

}  // namespace

TEST(SolveCubic, ZeroGradientPsd) {
  Matrix b(2, 2);
  b << 2.0, 0.0, 0.0, 0.0;
  const auto step = solve_cubic(make_sub(Vector::Zero(2), b, 1.0));
  EXPECT_EQ(step.s.norm(), 0.0);
  EXPECT_EQ(step.model_decrease, 0.0);
}

TEST(SolveCubic, NoCurvatureClosedForm) {
  const auto step = solve_cubic(make_sub(e1(2), Matrix::Zero(2, 2), 3.0));
  EXPECT_NEAR(step.s[0], -std::sqrt(1.0 / 3.0), 1e-12);
  EXPECT_NEAR(step.s[1], 0.0, 1e-14);
  EXPECT_NEAR(step.multiplier, 3.0 * std::sqrt(1.0 / 3.0), 1e-12);
}

TEST(SolveCubic, IdentityCurvatureClosedForm) {
  const auto step = solve_cubic(make_sub(e1(2), Matrix::Identity(2, 2), 1.0));
  EXPECT_NEAR(step.s[0], -(std::sqrt(5.0) - 1.0) / 2.0, 1e-12);
  EXPECT_NEAR(step.s[1], 0.0, 1e-14);
}

TEST(SolveCubic, ZeroGradientIndefinite) {
  Matrix b(2, 2);
  b << 1.0, 0.0, 0.0, -2.0;
  const auto step = solve_cubic(make_sub(Vector::Zero(2), b, 0.5));
  // Minimizer along e2: -t^2 + t^3/6 is smallest at t = 4 = -lambda_1 / sigma.
  EXPECT_NEAR(std::abs(step.s[1]), 4.0, 1e-12);
  EXPECT_NEAR(step.s[0], 0.0, 1e-14);
  EXPECT_NEAR(step.model_decrease, 16.0 - 64.0 / 6.0, 1e-10);
}

TEST(SolveCubic, HardCase) {
  // g orthogonal to the negative eigenvector with ||s_bar|| small enough.
  Matrix b(2, 2);
  b << 1.0, 0.0, 0.0, -1.0;
  Vector g(2);
  g << 0.1, 0.0;
  const double sigma = 1.0;
  const auto step = solve_cubic(make_sub(g, b, sigma));
  EXPECT_TRUE(step.hard_case);
  // nu = -lambda_1 = 1, s_1 = -g_1 / (1 + 1), s_2 from sigma ||s|| = 1.
  EXPECT_NEAR(step.s[0], -0.05, 1e-12);
  EXPECT_NEAR(std::abs(step.s[1]), std::sqrt(1.0 - 0.0025), 1e-10);
  EXPECT_LE(model_gradient(make_sub(g, b, sigma), step.s).norm(), 1e-10);
}

TEST(SolveCubic, ModelGradientVanishesOnRandomProblems) {
  RngStream rng(42);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.uniform_index(10));
    const Matrix a = Matrix::NullaryExpr(n, n, [&] { return rng.normal(); });
    const Matrix b = 0.5 * (a + a.transpose());
    const auto sub = make_sub(rng.normal_vector(n), b, 0.1 + 3.0 * rng.uniform());
    const auto step = solve_cubic(sub);
    const double scale = 1.0 + sub.g.norm();
    EXPECT_LE(model_gradient(sub, step.s).norm(), 1e-8 * scale);
    EXPECT_LE(std::abs(step.identity_residual), 1e-8 * scale);
    EXPECT_GE(step.model_decrease, sub.sigma * std::pow(step.s.norm(), 3) / 6.0 * (1 - 1e-10));
    EXPECT_TRUE(verify_step_conditions(sub, step.s).all());
  }
}

TEST(SolveCubic, GlobalOnGrid) {
  RngStream rng(7);
  for (int t = 0; t < 10; ++t) {
    const Matrix a = Matrix::NullaryExpr(2, 2, [&] { return rng.normal(); });
    const auto sub = make_sub(rng.normal_vector(2), 0.5 * (a + a.transpose()), 1.0 + rng.uniform());
    const double best = model_value(sub, solve_cubic(sub).s);
    for (int i = -60; i <= 60; ++i) {
      for (int j = -60; j <= 60; ++j) {
        Vector s(2);
        s << 0.05 * i, 0.05 * j;
        EXPECT_GE(model_value(sub, s), best - 1e-12);
      }
    }
  }
}

TEST(SolveCubic, RotationInvariant) {
  RngStream rng(9);
  const Matrix a = Matrix::NullaryExpr(4, 4, [&] { return rng.normal(); });
  const auto sub = make_sub(rng.normal_vector(4), 0.5 * (a + a.transpose()), 1.5);
  const Matrix q = random_orthogonal(4, 3);
  const auto rotated = make_sub(q * sub.g, q * sub.b * q.transpose(), sub.sigma);
  const auto s1 = solve_cubic(sub);
  const auto s2 = solve_cubic(rotated);
  EXPECT_LE((q * s1.s - s2.s).norm(), 1e-9);
  EXPECT_NEAR(s1.model_decrease, s2.model_decrease, 1e-10);
}

TEST(SolveCubic, RejectsBadInput) {
  EXPECT_THROW(solve_cubic(make_sub(e1(2), Matrix::Zero(2, 2), 0.0)), InvalidArgument);
  EXPECT_THROW(solve_cubic(make_sub(e1(2), Matrix::Zero(3, 3), 1.0)), InvalidArgument);
  Vector g = e1(2);
  g[1] = std::nan("");
  EXPECT_THROW(solve_cubic(make_sub(g, Matrix::Zero(2, 2), 1.0)), NumericalError);
}

TEST(ModelValue, OriginAndClosedForm) {
  const auto sub = make_sub(e1(2), Matrix::Zero(2, 2), 3.0);
  EXPECT_EQ(model_value(sub, Vector::Zero(2)), 0.0);
  EXPECT_EQ((model_gradient(sub, Vector::Zero(2)) - sub.g).norm(), 0.0);
  Vector s(2);
  s << -std::sqrt(1.0 / 3.0), 0.0;
  EXPECT_NEAR(model_gradient(sub, s).norm(), 0.0, 1e-15);
  EXPECT_LT(model_value(sub, s), 0.0);
}

TEST(ModelValue, GradientMatchesFiniteDifferences) {
  RngStream rng(11);
  const Matrix a = Matrix::NullaryExpr(3, 3, [&] { return rng.normal(); });
  const auto sub = make_sub(rng.normal_vector(3), 0.5 * (a + a.transpose()), 2.0);
  const Vector s = rng.normal_vector(3);
  const double h = 1e-6;
  Vector fd(3);
  for (int i = 0; i < 3; ++i) {
    const Vector e = Vector::Unit(3, i) * h;
    fd[i] = (model_value(sub, s + e) - model_value(sub, s - e)) / (2 * h);
  }
  EXPECT_LE((fd - model_gradient(sub, s)).norm(), 1e-7);
}

TEST(StepConditions, TruncatedStepIsFlagged) {
  const auto sub = make_sub(e1(2), Matrix::Identity(2, 2), 1.0);
  const Vector s = solve_cubic(sub).s;
  EXPECT_TRUE(verify_step_conditions(sub, s).all());
  const auto half = verify_step_conditions(sub, 0.5 * s);
  EXPECT_FALSE(half.identity_holds);
  EXPECT_FALSE(half.termination_holds);
  EXPECT_FALSE(half.all());
}

TEST(StepConditions, ZeroStep) {
  const auto sub = make_sub(Vector::Zero(2), Matrix::Identity(2, 2), 1.0);
  EXPECT_TRUE(verify_step_conditions(sub, Vector::Zero(2)).all());
}
