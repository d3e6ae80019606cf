#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "randopt/types.hpp"

namespace randopt {

enum class ConvexityClass { nonconvex, convex, strongly_convex };

std::string to_string(ConvexityClass c);

/// Axis-aligned box [lo, hi].
struct Box {
  Vector lo;
  Vector hi;

  bool contains(const Vector& x) const;
};

/// Analytic (or sampled) constants the complexity theory consumes.
struct ObjectiveConstants {
  double f_star = 0.0;
  std::optional<Vector> x_star;
  double lip_grad = 0.0;            // L
  std::optional<double> lip_hess;   // L_H
  double strong_mu = 0.0;           // mu, 0 unless strongly convex
  ConvexityClass convexity = ConvexityClass::nonconvex;
  std::optional<Box> domain;        // iterates must stay inside when present
  bool estimated = false;           // L / L_H come from sampling, not analysis
};

/// Smooth objective with value, gradient and Hessian access.
///
/// Immutable after construction; concurrent const access is safe.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::string name() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual Matrix hessian(const Vector& x) const = 0;

  /// D(x0): radius bound ||x - x*|| <= D on the level set {f <= f(x0)}.
  virtual std::optional<double> level_diameter(const Vector& /*x0*/) const { return std::nullopt; }

  Eigen::Index dim() const { return dim_; }
  const ObjectiveConstants& constants() const { return constants_; }

 protected:
  Objective(Eigen::Index dim, ObjectiveConstants constants)
      : dim_(dim), constants_(std::move(constants)) {}

  Eigen::Index dim_;
  ObjectiveConstants constants_;
};

using ObjectivePtr = std::shared_ptr<const Objective>;

/// f(x) = 1/2 (x - c)^T Q (x - c) + offset.
class QuadraticObjective : public Objective {
 public:
  QuadraticObjective(Matrix q, Vector center, double offset, ObjectiveConstants constants,
                     std::string name = "quadratic");

  std::string name() const override { return name_; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;
  std::optional<double> level_diameter(const Vector& x0) const override;

  const Matrix& q() const { return q_; }
  const Vector& center() const { return center_; }

 private:
  Matrix q_;
  Vector center_;
  double offset_;
  std::string name_;
};

/// f(x) = sqrt(1 + ||x||^2).
class PseudoHuberObjective : public Objective {
 public:
  explicit PseudoHuberObjective(Eigen::Index dim);

  std::string name() const override { return "pseudo_huber"; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;
  std::optional<double> level_diameter(const Vector& x0) const override;
};

/// Chained Rosenbrock sum_i 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2 on a box.
class RosenbrockObjective : public Objective {
 public:
  RosenbrockObjective(Eigen::Index dim, Box domain, double lip_grad, double lip_hess);

  std::string name() const override { return "rosenbrock"; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;
};

/// Sum of N quadratic terms f_i(x) = 1/2 (x - c_i)^T A (x - c_i) sharing one Hessian A.
class FiniteSumObjective : public Objective {
 public:
  FiniteSumObjective(Matrix component_hessian, std::vector<Vector> centers);

  std::string name() const override { return "finite_sum"; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;
  std::optional<double> level_diameter(const Vector& x0) const override;

  std::size_t num_terms() const { return components_.size(); }
  const QuadraticObjective& component(std::size_t i) const { return components_.at(i); }
  Vector component_gradient(std::size_t i, const Vector& x) const;
  /// w with E||grad f_S - grad f||^2 <= w / |S| for the (N/|S|)-scaled batch estimator.
  double variance_bound() const { return variance_bound_; }

 private:
  Matrix a_;
  std::vector<QuadraticObjective> components_;
  double variance_bound_ = 0.0;
};

using FiniteSumPtr = std::shared_ptr<const FiniteSumObjective>;

/// Strongly convex quadratic with spectrum spanning [1, condition_number].
std::shared_ptr<const QuadraticObjective> make_quadratic(Eigen::Index dim, double condition_number,
                                                         std::uint64_t seed);

std::shared_ptr<const PseudoHuberObjective> make_pseudo_huber(Eigen::Index dim);

/// Chained Rosenbrock restricted to `domain`; L and L_H are sampled over the box
/// and inflated by 1.1.
std::shared_ptr<const RosenbrockObjective> make_rosenbrock(Eigen::Index dim, const Box& domain);
std::shared_ptr<const RosenbrockObjective> make_rosenbrock(Eigen::Index dim, double lo, double hi);

FiniteSumPtr make_finite_sum(Eigen::Index dim, std::size_t num_terms, double heterogeneity,
                             std::uint64_t seed);

/// Random orthogonal matrix (QR of a Gaussian matrix with sign fix).
Matrix random_orthogonal(Eigen::Index dim, std::uint64_t seed);

/// Largest singular value of a symmetric matrix.
double spectral_norm_sym(const Matrix& m);

}  // namespace randopt
