#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "randopt/problems.hpp"
#include "randopt/rng.hpp"

namespace randopt {

/// What a model looks like on a false draw.
enum class CorruptionMode { zero_vector, negated_gradient, random_huge, scaled_noise };

std::string to_string(CorruptionMode m);
CorruptionMode corruption_mode_from_string(const std::string& s);

struct OracleConfig {
  double p = 0.8;          // probability of an accurate draw
  CorruptionMode corruption = CorruptionMode::random_huge;
  double kappa = 1.0;      // line-search accuracy constant
  double kappa_g = 1.0;    // ARC gradient accuracy constant
  double kappa_h = 1.0;    // ARC Hessian accuracy constant
  double eta = 0.5;        // fraction of the admissible error radius used on accurate draws
  std::uint64_t seed = 0;

  void validate() const;
};

struct LinearModel {
  Vector g;
  bool intended_true = false;
};

struct QuadraticModel {
  Vector g;
  Matrix b;
  bool intended_true = false;
};

/// Linear model whose gradient is accurate in the line-search sense with probability p.
///
/// Accurate draws perturb the true gradient by a uniformly random vector of norm
/// eta * kappa * alpha * ||grad f|| / (1 + kappa * alpha); by the triangle
/// inequality this implies ||g - grad f|| <= kappa * alpha * ||g||.
LinearModel sample_linear_model(const Objective& obj, const Vector& x, double alpha,
                                const OracleConfig& cfg, RngStream& rng);

/// ||g - true_grad|| <= kappa * alpha * ||g||.
bool check_ls_accuracy(const Vector& g, const Vector& true_grad, double kappa, double alpha);

/// Exact (grad f, H) with probability p, a corrupted pair otherwise.
QuadraticModel sample_quadratic_model(const Objective& obj, const Vector& x,
                                      const OracleConfig& cfg, RngStream& rng);

/// ||true_grad - g|| <= kappa_g ||s||^2 and ||(true_hess - b) s|| <= kappa_h ||s||^2.
bool check_arc_accuracy(const Vector& g, const Matrix& b, const Vector& true_grad,
                        const Matrix& true_hess, const Vector& s, double kappa_g, double kappa_h);

/// (N / |S|) * sum_{i in S} grad f_i(x) over a uniform subset S drawn without replacement.
Vector subsampled_gradient(const FiniteSumObjective& fs, const Vector& x, std::size_t batch_size,
                           RngStream& rng);

/// Smallest |S| with w / (min{1/2, alpha}^2 ||grad f||^2 |S|) <= 1 - target_prob, capped at N.
std::size_t required_batch_size(const FiniteSumObjective& fs, const Vector& x, double alpha,
                                double target_prob);

// -------------------------------------------------------------------------
// Oracle objects used by the algorithms.

/// Source of first-order models for the line-search methods.
class FirstOrderOracle {
 public:
  virtual ~FirstOrderOracle() = default;

  /// `radius` is the sampling radius alpha_k * xi_k of the gated variant; other
  /// oracles ignore it.
  virtual LinearModel sample(const Objective& obj, const Vector& x, double alpha, double radius,
                             RngStream& rng) const = 0;

  virtual const OracleConfig& config() const = 0;
};

/// Source of (g, B) pairs for ARC.
class SecondOrderOracle {
 public:
  virtual ~SecondOrderOracle() = default;

  /// `radius` is xi_k / sigma_k for the gated variant; other oracles ignore it.
  virtual QuadraticModel sample(const Objective& obj, const Vector& x, double radius,
                                RngStream& rng) const = 0;

  virtual const OracleConfig& config() const = 0;
};

/// Wraps sample_linear_model.
class SyntheticLinearOracle final : public FirstOrderOracle {
 public:
  explicit SyntheticLinearOracle(OracleConfig cfg);
  LinearModel sample(const Objective& obj, const Vector& x, double alpha, double radius,
                     RngStream& rng) const override;
  const OracleConfig& config() const override { return cfg_; }

 private:
  OracleConfig cfg_;
};

/// Batch-sampled gradients with the batch size picked by required_batch_size(p).
class SubsampledLinearOracle final : public FirstOrderOracle {
 public:
  SubsampledLinearOracle(FiniteSumPtr fs, OracleConfig cfg);
  LinearModel sample(const Objective& obj, const Vector& x, double alpha, double radius,
                     RngStream& rng) const override;
  const OracleConfig& config() const override { return cfg_; }

 private:
  FiniteSumPtr fs_;
  OracleConfig cfg_;
};

/// How a fully-linear / fully-quadratic model is built on the sampling ball.
enum class BallModelKind { exact, finite_difference };

/// Probabilistically fully-linear models.
///
/// `exact` returns grad f with probability p (corrupted otherwise).
/// `finite_difference` uses forward differences with step = radius; each of the
/// n function evaluations fails independently with probability 1 - p^{1/n}, and a
/// failed evaluation returns an arbitrarily wrong value.
class FullyLinearOracle final : public FirstOrderOracle {
 public:
  FullyLinearOracle(OracleConfig cfg, BallModelKind kind);
  LinearModel sample(const Objective& obj, const Vector& x, double alpha, double radius,
                     RngStream& rng) const override;
  const OracleConfig& config() const override { return cfg_; }
  BallModelKind kind() const { return kind_; }

 private:
  OracleConfig cfg_;
  BallModelKind kind_;
};

/// Wraps sample_quadratic_model.
class SyntheticQuadraticOracle final : public SecondOrderOracle {
 public:
  explicit SyntheticQuadraticOracle(OracleConfig cfg);
  QuadraticModel sample(const Objective& obj, const Vector& x, double radius,
                        RngStream& rng) const override;
  const OracleConfig& config() const override { return cfg_; }

 private:
  OracleConfig cfg_;
};

/// Probabilistically fully-quadratic models on B(x, radius).
///
/// `finite_difference` uses central differences for g (error O(radius^2)) and
/// second differences of f for B (error O(radius)); evaluations fail as in
/// FullyLinearOracle.
class FullyQuadraticOracle final : public SecondOrderOracle {
 public:
  FullyQuadraticOracle(OracleConfig cfg, BallModelKind kind);
  QuadraticModel sample(const Objective& obj, const Vector& x, double radius,
                        RngStream& rng) const override;
  const OracleConfig& config() const override { return cfg_; }
  BallModelKind kind() const { return kind_; }

 private:
  OracleConfig cfg_;
  BallModelKind kind_;
};

}  // namespace randopt
