#pragma once

#include <optional>
#include <vector>

#include "randopt/oracles.hpp"
#include "randopt/problems.hpp"
#include "randopt/rng.hpp"
#include "randopt/trace.hpp"

namespace randopt {

/// d = -T_k g for a family of SPD matrices T_0, T_1, ... (cycled by iteration).
///
/// With spectra in [lambda_min, lambda_max] the directions satisfy
/// d^T g <= -beta ||d|| ||g|| and kappa1 ||g|| <= ||d|| <= kappa2 ||g|| with
/// beta = lambda_min / lambda_max, kappa1 = lambda_min, kappa2 = lambda_max.
class DirectionTransform {
 public:
  explicit DirectionTransform(std::vector<Matrix> family);

  Vector direction(const Vector& g, std::size_t k) const;
  Eigen::Index dim() const { return family_.front().rows(); }

  double beta() const { return beta_; }
  double kappa1() const { return kappa1_; }
  double kappa2() const { return kappa2_; }

 private:
  std::vector<Matrix> family_;
  double beta_ = 1.0;
  double kappa1_ = 1.0;
  double kappa2_ = 1.0;
};

DirectionTransform make_general_direction(const Matrix& t);
DirectionTransform make_general_direction(const std::vector<Matrix>& family);

enum class DirectionVariant { steepest, general };

struct LsConfig {
  double gamma = 0.5;
  double theta = 0.5;
  double alpha_max = 1.0;
  double alpha0 = 0.5;
  std::size_t max_iters = 1000000;
  DirectionVariant variant = DirectionVariant::steepest;
  std::optional<DirectionTransform> transform;  // required for the general variant

  // Gated (fully-linear) variant only.
  double kappa_delta = 2.0;
  double xi0 = 1.0;

  // Reuse the model after an unsuccessful step instead of redrawing it. This
  // turns the method into classical backtracking when the model is exact.
  bool hold_model_on_failure = false;

  void validate() const;

  double beta() const { return transform ? transform->beta() : 1.0; }
  double kappa1() const { return transform ? transform->kappa1() : 1.0; }
  double kappa2() const { return transform ? transform->kappa2() : 1.0; }
};

/// Sufficient decrease test. Without `d`: f_trial <= f_x - alpha theta ||g||^2;
/// with `d`: f_trial <= f_x + alpha theta d^T g.
bool armijo_check(double f_x, double f_trial, double alpha, double theta, const Vector& g,
                  const Vector* d = nullptr);

/// Line search with random models.
///
/// The hitting event is checked on the incumbent before the model is drawn, so
/// a trace that hits at N has exactly N records. Throws NumericalError on
/// non-finite values or when an accepted iterate leaves the objective's domain.
Trace run_linesearch(const Objective& obj, const Vector& x0, const FirstOrderOracle& oracle,
                     const LsConfig& cfg, const StoppingRule& stop, RngStream& rng);

/// Line search with an accuracy gate ||g|| >= kappa_delta xi_k; failing the gate
/// divides xi by kappa_delta and leaves x and alpha unchanged.
Trace run_ls_fully_linear(const Objective& obj, const Vector& x0, const FirstOrderOracle& oracle,
                          const LsConfig& cfg, const StoppingRule& stop, RngStream& rng);

}  // namespace randopt
