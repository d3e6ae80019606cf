#include "randopt/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace randopt {

namespace {

constexpr double kHugeScale = 1e3;

Vector corrupt_gradient(const Vector& grad, CorruptionMode mode, RngStream& rng) {
  const double gn = grad.norm();
  switch (mode) {
    case CorruptionMode::zero_vector:
      return Vector::Zero(grad.size());
    case CorruptionMode::negated_gradient:
      return -grad;
    case CorruptionMode::random_huge:
      return kHugeScale * (1.0 + gn) * rng.unit_vector(grad.size());
    case CorruptionMode::scaled_noise:
      return grad + gn * rng.unit_vector(grad.size());
  }
  throw InvalidArgument("unknown corruption mode");
}

// Symmetric matrix with unit Frobenius norm.
Matrix random_symmetric(Eigen::Index n, RngStream& rng) {
  Matrix e(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) e(i, j) = rng.normal();
  Matrix s = 0.5 * (e + e.transpose());
  const double fn = s.norm();
  return fn > 0.0 ? Matrix(s / fn) : s;
}

QuadraticModel corrupt_pair(const Vector& grad, const Matrix& hess, CorruptionMode mode,
                            RngStream& rng) {
  QuadraticModel m;
  const Eigen::Index n = grad.size();
  switch (mode) {
    case CorruptionMode::zero_vector:
      m.g = Vector::Zero(n);
      m.b = Matrix::Zero(n, n);
      break;
    case CorruptionMode::negated_gradient:
      m.g = -grad;
      m.b = -hess;
      break;
    case CorruptionMode::random_huge:
      m.g = kHugeScale * (1.0 + grad.norm()) * rng.unit_vector(n);
      m.b = hess + kHugeScale * (1.0 + hess.norm()) * random_symmetric(n, rng);
      break;
    case CorruptionMode::scaled_noise:
      m.g = grad + grad.norm() * rng.unit_vector(n);
      m.b = hess + hess.norm() * random_symmetric(n, rng);
      break;
  }
  m.intended_true = false;
  return m;
}

// Function evaluations that fail independently; a failed evaluation is far off.
class NoisyEvaluator {
 public:
  NoisyEvaluator(const Objective& obj, double fail_prob, RngStream& rng)
      : obj_(obj), fail_prob_(fail_prob), rng_(rng) {}

  double operator()(const Vector& y) {
    const double v = obj_.value(y);
    if (fail_prob_ > 0.0 && rng_.bernoulli(fail_prob_)) {
      any_failed_ = true;
      return v + kHugeScale * (1.0 + std::abs(v)) * rng_.normal();
    }
    return v;
  }

  bool any_failed() const { return any_failed_; }

 private:
  const Objective& obj_;
  double fail_prob_;
  RngStream& rng_;
  bool any_failed_ = false;
};

double per_eval_failure(double p, double evaluations) {
  return 1.0 - std::pow(p, 1.0 / evaluations);
}

void require_radius(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidArgument("finite-difference models need a positive radius");
}

}  // namespace

std::string to_string(CorruptionMode m) {
  switch (m) {
    case CorruptionMode::zero_vector: return "zero_vector";
    case CorruptionMode::negated_gradient: return "negated_gradient";
    case CorruptionMode::random_huge: return "random_huge";
    case CorruptionMode::scaled_noise: return "scaled_noise";
  }
  return "unknown";
}

CorruptionMode corruption_mode_from_string(const std::string& s) {
  if (s == "zero_vector") return CorruptionMode::zero_vector;
  if (s == "negated_gradient") return CorruptionMode::negated_gradient;
  if (s == "random_huge") return CorruptionMode::random_huge;
  if (s == "scaled_noise") return CorruptionMode::scaled_noise;
  throw InvalidArgument("unknown corruption mode '" + s + "'");
}

void OracleConfig::validate() const {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("oracle p must lie in (0, 1]");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidArgument("kappa must be positive");
  if (!(kappa_g > 0.0) || !std::isfinite(kappa_g)) throw InvalidArgument("kappa_g must be positive");
  if (!(kappa_h > 0.0) || !std::isfinite(kappa_h)) throw InvalidArgument("kappa_h must be positive");
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("eta must lie in [0, 1]");
}

LinearModel sample_linear_model(const Objective& obj, const Vector& x, double alpha,
                                const OracleConfig& cfg, RngStream& rng) {
  cfg.validate();
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  const Vector grad = obj.gradient(x);
  if (rng.bernoulli(cfg.p)) {
    const double ka = cfg.kappa * alpha;
    const double radius = cfg.eta * ka * grad.norm() / (1.0 + ka);
    LinearModel m;
    m.g = radius > 0.0 ? Vector(grad + radius * rng.unit_vector(grad.size())) : grad;
    m.intended_true = true;
    return m;
  }
  return {corrupt_gradient(grad, cfg.corruption, rng), false};
}

namespace {
// Relative slack of a few ulps so exact boundary cases are not decided by rounding.
constexpr double kIndicatorSlack = 1e-12;
}  // namespace

bool check_ls_accuracy(const Vector& g, const Vector& true_grad, double kappa, double alpha) {
  return (g - true_grad).norm() <= kappa * alpha * g.norm() * (1.0 + kIndicatorSlack);
}

QuadraticModel sample_quadratic_model(const Objective& obj, const Vector& x,
                                      const OracleConfig& cfg, RngStream& rng) {
  cfg.validate();
  const Vector grad = obj.gradient(x);
  const Matrix hess = obj.hessian(x);
  if (rng.bernoulli(cfg.p)) return {grad, hess, true};
  return corrupt_pair(grad, hess, cfg.corruption, rng);
}

bool check_arc_accuracy(const Vector& g, const Matrix& b, const Vector& true_grad,
                        const Matrix& true_hess, const Vector& s, double kappa_g, double kappa_h) {
  const double s2 = s.squaredNorm() * (1.0 + kIndicatorSlack);
  return (true_grad - g).norm() <= kappa_g * s2 && ((true_hess - b) * s).norm() <= kappa_h * s2;
}

Vector subsampled_gradient(const FiniteSumObjective& fs, const Vector& x, std::size_t batch_size,
                           RngStream& rng) {
  const std::size_t n = fs.num_terms();
  if (batch_size < 1 || batch_size > n)
    throw InvalidArgument("batch size must lie in [1, N]");
  const auto idx = rng.sample_without_replacement(n, batch_size);
  Vector g = Vector::Zero(fs.dim());
  for (std::size_t i : idx) g += fs.component_gradient(i, x);
  return g * (static_cast<double>(n) / static_cast<double>(batch_size));
}

std::size_t required_batch_size(const FiniteSumObjective& fs, const Vector& x, double alpha,
                                double target_prob) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (!(target_prob >= 0.0 && target_prob <= 1.0))
    throw InvalidArgument("target probability must lie in [0, 1]");
  const std::size_t n = fs.num_terms();
  const double gn = fs.gradient(x).norm();
  if (gn == 0.0) throw InvalidArgument("batch size undefined at a stationary point");
  if (target_prob >= 1.0) return n;
  const double a = std::min(0.5, alpha);
  const double raw = fs.variance_bound() / (a * a * gn * gn * (1.0 - target_prob));
  // Absorb rounding so an exact integer ratio is not bumped up by one.
  const double b = std::ceil(raw * (1.0 - 1e-12));
  if (!(b < static_cast<double>(n))) return n;
  return std::max<std::size_t>(1, static_cast<std::size_t>(b));
}

// -------------------------------------------------------------------------

SyntheticLinearOracle::SyntheticLinearOracle(OracleConfig cfg) : cfg_(cfg) { cfg_.validate(); }

LinearModel SyntheticLinearOracle::sample(const Objective& obj, const Vector& x, double alpha,
                                          double /*radius*/, RngStream& rng) const {
  return sample_linear_model(obj, x, alpha, cfg_, rng);
}

SubsampledLinearOracle::SubsampledLinearOracle(FiniteSumPtr fs, OracleConfig cfg)
    : fs_(std::move(fs)), cfg_(cfg) {
  if (!fs_) throw InvalidArgument("subsampled oracle needs a finite-sum objective");
  cfg_.validate();
}

LinearModel SubsampledLinearOracle::sample(const Objective& /*obj*/, const Vector& x, double alpha,
                                           double /*radius*/, RngStream& rng) const {
  const Vector grad = fs_->gradient(x);
  if (grad.norm() == 0.0) return {grad, true};
  const std::size_t b = required_batch_size(*fs_, x, alpha, cfg_.p);
  LinearModel m;
  m.g = subsampled_gradient(*fs_, x, b, rng);
  m.intended_true = b == fs_->num_terms() || check_ls_accuracy(m.g, grad, cfg_.kappa, alpha);
  return m;
}

FullyLinearOracle::FullyLinearOracle(OracleConfig cfg, BallModelKind kind)
    : cfg_(cfg), kind_(kind) {
  cfg_.validate();
}

LinearModel FullyLinearOracle::sample(const Objective& obj, const Vector& x, double /*alpha*/,
                                      double radius, RngStream& rng) const {
  if (kind_ == BallModelKind::exact) {
    const Vector grad = obj.gradient(x);
    if (rng.bernoulli(cfg_.p)) return {grad, true};
    return {corrupt_gradient(grad, cfg_.corruption, rng), false};
  }
  require_radius(radius);
  const Eigen::Index n = x.size();
  NoisyEvaluator eval(obj, per_eval_failure(cfg_.p, static_cast<double>(n + 1)), rng);
  const double f0 = eval(x);
  LinearModel m;
  m.g.resize(n);
  Vector y = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = x(i) + radius;
    m.g(i) = (eval(y) - f0) / radius;
    y(i) = x(i);
  }
  m.intended_true = !eval.any_failed();
  return m;
}

SyntheticQuadraticOracle::SyntheticQuadraticOracle(OracleConfig cfg) : cfg_(cfg) {
  cfg_.validate();
}

QuadraticModel SyntheticQuadraticOracle::sample(const Objective& obj, const Vector& x,
                                                double /*radius*/, RngStream& rng) const {
  return sample_quadratic_model(obj, x, cfg_, rng);
}

FullyQuadraticOracle::FullyQuadraticOracle(OracleConfig cfg, BallModelKind kind)
    : cfg_(cfg), kind_(kind) {
  cfg_.validate();
}

QuadraticModel FullyQuadraticOracle::sample(const Objective& obj, const Vector& x, double radius,
                                            RngStream& rng) const {
  if (kind_ == BallModelKind::exact) return sample_quadratic_model(obj, x, cfg_, rng);
  require_radius(radius);
  const Eigen::Index n = x.size();
  const double evals = 1.0 + 2.0 * n + 2.0 * n * (n - 1);
  NoisyEvaluator eval(obj, per_eval_failure(cfg_.p, evals), rng);
  const double h = radius;
  const double f0 = eval(x);
  Vector fp(n), fm(n);
  Vector y = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = x(i) + h;
    fp(i) = eval(y);
    y(i) = x(i) - h;
    fm(i) = eval(y);
    y(i) = x(i);
  }
  QuadraticModel m;
  m.g = (fp - fm) / (2.0 * h);
  m.b.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m.b(i, i) = (fp(i) - 2.0 * f0 + fm(i)) / (h * h);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
          y(i) = x(i) + si * h;
          y(j) = x(j) + sj * h;
          acc += si * sj * eval(y);
        }
      }
      y(i) = x(i);
      y(j) = x(j);
      m.b(i, j) = m.b(j, i) = acc / (4.0 * h * h);
    }
  }
  m.intended_true = !eval.any_failed();
  return m;
}

}  // namespace randopt
