#include "randopt/problems.hpp"

#include <algorithm>
#include <cmath>

#include "randopt/rng.hpp"

namespace randopt {

std::string to_string(ConvexityClass c) {
  switch (c) {
    case ConvexityClass::nonconvex: return "nonconvex";
    case ConvexityClass::convex: return "convex";
    case ConvexityClass::strongly_convex: return "strongly_convex";
  }
  return "unknown";
}

bool Box::contains(const Vector& x) const {
  return x.size() == lo.size() && (x.array() >= lo.array()).all() &&
         (x.array() <= hi.array()).all();
}

double spectral_norm_sym(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix random_orthogonal(Eigen::Index dim, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

// ---------------------------------------------------------------- quadratic

QuadraticObjective::QuadraticObjective(Matrix q, Vector center, double offset,
                                       ObjectiveConstants constants, std::string name)
    : Objective(q.rows(), std::move(constants)),
      q_(std::move(q)),
      center_(std::move(center)),
      offset_(offset),
      name_(std::move(name)) {
  if (q_.rows() != q_.cols() || center_.size() != q_.rows())
    throw InvalidArgument("QuadraticObjective: dimension mismatch");
}

double QuadraticObjective::value(const Vector& x) const {
  const Vector d = x - center_;
  return 0.5 * d.dot(q_ * d) + offset_;
}

Vector QuadraticObjective::gradient(const Vector& x) const { return q_ * (x - center_); }

Matrix QuadraticObjective::hessian(const Vector& /*x*/) const { return q_; }

std::optional<double> QuadraticObjective::level_diameter(const Vector& x0) const {
  if (constants_.strong_mu <= 0.0) return std::nullopt;
  const double gap = std::max(0.0, value(x0) - constants_.f_star);
  return std::sqrt(2.0 * gap / constants_.strong_mu);
}

std::shared_ptr<const QuadraticObjective> make_quadratic(Eigen::Index dim, double condition_number,
                                                         std::uint64_t seed) {
  if (dim < 1) throw InvalidArgument("make_quadratic: dim must be >= 1");
  if (!(condition_number >= 1.0))
    throw InvalidArgument("make_quadratic: condition_number must be >= 1");

  Vector eigenvalues(dim);
  if (dim == 1) {
    eigenvalues[0] = 1.0;
  } else {
    for (Eigen::Index i = 0; i < dim; ++i)
      eigenvalues[i] = std::pow(condition_number, static_cast<double>(i) / (dim - 1));
  }

  Matrix q;
  if (condition_number == 1.0 || dim == 1) {
    q = Matrix::Identity(dim, dim);
  } else {
    const Matrix r = random_orthogonal(dim, seed);
    q = r * eigenvalues.asDiagonal() * r.transpose();
    q = 0.5 * (q + q.transpose());
  }

  ObjectiveConstants c;
  c.f_star = 0.0;
  c.x_star = Vector::Zero(dim);
  c.lip_grad = eigenvalues.maxCoeff();
  c.lip_hess = 0.0;
  c.strong_mu = eigenvalues.minCoeff();
  c.convexity = ConvexityClass::strongly_convex;
  return std::make_shared<QuadraticObjective>(std::move(q), Vector::Zero(dim), 0.0, std::move(c));
}

// ------------------------------------------------------------- pseudo-Huber

namespace {
ObjectiveConstants pseudo_huber_constants(Eigen::Index dim) {
  ObjectiveConstants c;
  c.f_star = 1.0;
  c.x_star = Vector::Zero(dim);
  c.lip_grad = 1.0;
  // sup over r of 3r/(1+r^2)^{3/2} + 3r^3/(1+r^2)^{5/2} is about 1.71.
  c.lip_hess = 2.0;
  c.strong_mu = 0.0;
  c.convexity = ConvexityClass::convex;
  return c;
}
}  // namespace

PseudoHuberObjective::PseudoHuberObjective(Eigen::Index dim)
    : Objective(dim, pseudo_huber_constants(dim)) {
  if (dim < 1) throw InvalidArgument("make_pseudo_huber: dim must be >= 1");
}

double PseudoHuberObjective::value(const Vector& x) const {
  return std::sqrt(1.0 + x.squaredNorm());
}

Vector PseudoHuberObjective::gradient(const Vector& x) const { return x / value(x); }

Matrix PseudoHuberObjective::hessian(const Vector& x) const {
  const double f = value(x);
  Matrix h = Matrix::Identity(dim_, dim_) / f;
  h.noalias() -= (x * x.transpose()) / (f * f * f);
  return h;
}

std::optional<double> PseudoHuberObjective::level_diameter(const Vector& x0) const {
  const double f0 = value(x0);
  return std::sqrt(std::max(0.0, f0 * f0 - 1.0));
}

std::shared_ptr<const PseudoHuberObjective> make_pseudo_huber(Eigen::Index dim) {
  return std::make_shared<PseudoHuberObjective>(dim);
}

// --------------------------------------------------------------- Rosenbrock

RosenbrockObjective::RosenbrockObjective(Eigen::Index dim, Box domain, double lip_grad,
                                         double lip_hess)
    : Objective(dim, ObjectiveConstants{}) {
  constants_.lip_grad = lip_grad;
  constants_.lip_hess = lip_hess;
  constants_.f_star = 0.0;
  constants_.x_star = Vector::Ones(dim);
  constants_.convexity = ConvexityClass::nonconvex;
  constants_.domain = std::move(domain);
  constants_.estimated = true;
}

double RosenbrockObjective::value(const Vector& x) const {
  double f = 0.0;
  for (Eigen::Index i = 0; i + 1 < dim_; ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    f += 100.0 * a * a + b * b;
  }
  return f;
}

Vector RosenbrockObjective::gradient(const Vector& x) const {
  Vector g = Vector::Zero(dim_);
  for (Eigen::Index i = 0; i + 1 < dim_; ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    g[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
    g[i + 1] += 200.0 * a;
  }
  return g;
}

Matrix RosenbrockObjective::hessian(const Vector& x) const {
  Matrix h = Matrix::Zero(dim_, dim_);
  for (Eigen::Index i = 0; i + 1 < dim_; ++i) {
    h(i, i) += 1200.0 * x[i] * x[i] - 400.0 * x[i + 1] + 2.0;
    h(i, i + 1) += -400.0 * x[i];
    h(i + 1, i) += -400.0 * x[i];
    h(i + 1, i + 1) += 200.0;
  }
  return h;
}

namespace {

std::vector<Vector> sample_box(const Box& box, std::uint64_t seed) {
  const Eigen::Index n = box.lo.size();
  constexpr double kBudget = 40000.0;
  std::vector<Vector> points;

  const auto per_axis = static_cast<long>(std::floor(std::pow(kBudget, 1.0 / static_cast<double>(n))));
  if (per_axis >= 2) {
    // Full lattice including every corner.
    std::vector<long> idx(n, 0);
    for (;;) {
      Vector p(n);
      for (Eigen::Index j = 0; j < n; ++j)
        p[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * static_cast<double>(idx[j]) / (per_axis - 1);
      points.push_back(std::move(p));
      Eigen::Index j = 0;
      while (j < n && ++idx[j] == per_axis) idx[j++] = 0;
      if (j == n) break;
    }
  }
  // Random interior points and random corners in high dimension.
  RngStream rng(seed);
  const int extra = per_axis >= 2 ? 0 : 20000;
  for (int s = 0; s < extra; ++s) {
    Vector p(n);
    const bool corner = s % 2 == 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double u = corner ? (rng.bernoulli(0.5) ? 1.0 : 0.0) : rng.uniform();
      p[j] = box.lo[j] + (box.hi[j] - box.lo[j]) * u;
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace

std::shared_ptr<const RosenbrockObjective> make_rosenbrock(Eigen::Index dim, const Box& domain) {
  if (dim < 2 || dim % 2 != 0)
    throw InvalidArgument("make_rosenbrock: dim must be even and >= 2");
  if (domain.lo.size() != dim || domain.hi.size() != dim)
    throw InvalidArgument("make_rosenbrock: box dimension mismatch");
  if (!((domain.hi - domain.lo).array() > 0.0).all())
    throw InvalidArgument("make_rosenbrock: degenerate domain box");

  const auto probe_obj = std::make_shared<RosenbrockObjective>(dim, domain, 0.0, 0.0);
  const RosenbrockObjective* obj = probe_obj.get();

  const auto points = sample_box(domain, 0x5eed);
  const double width = (domain.hi - domain.lo).minCoeff();
  const double h = 1e-3 * width;
  double lmax = 0.0;
  double lhmax = 0.0;
  RngStream rng(0xa11ce);
  for (const auto& p : points) {
    const Matrix hp = obj->hessian(p);
    lmax = std::max(lmax, spectral_norm_sym(hp));
    // Hessian difference quotients along each axis and one random direction,
    // stepping back into the box when needed.
    auto probe = [&](const Vector& dir) {
      Vector q = p + h * dir;
      if (!domain.contains(q)) q = p - h * dir;
      if (!domain.contains(q)) return;
      const double dq = spectral_norm_sym(obj->hessian(q) - hp) / (q - p).norm();
      lhmax = std::max(lhmax, dq);
    };
    if (dim <= 4) {
      for (Eigen::Index j = 0; j < dim; ++j) probe(Vector::Unit(dim, j));
    }
    probe(rng.unit_vector(dim));
  }

  return std::make_shared<RosenbrockObjective>(dim, domain, 1.1 * lmax, 1.1 * lhmax);
}

std::shared_ptr<const RosenbrockObjective> make_rosenbrock(Eigen::Index dim, double lo, double hi) {
  return make_rosenbrock(dim, Box{Vector::Constant(dim, lo), Vector::Constant(dim, hi)});
}

// --------------------------------------------------------------- finite sum

namespace {
ObjectiveConstants finite_sum_constants(const Matrix& a, const std::vector<Vector>& centers) {
  const auto n_terms = static_cast<double>(centers.size());
  const Eigen::Index dim = a.rows();
  Vector mean = Vector::Zero(dim);
  for (const auto& c : centers) mean += c;
  mean /= n_terms;
  double f_star = 0.0;
  for (const auto& c : centers) f_star += 0.5 * (c - mean).dot(a * (c - mean));

  Eigen::SelfAdjointEigenSolver<Matrix> eig(a * n_terms, Eigen::EigenvaluesOnly);
  ObjectiveConstants k;
  k.f_star = f_star;
  k.x_star = mean;
  k.lip_grad = eig.eigenvalues().maxCoeff();
  k.lip_hess = 0.0;
  k.strong_mu = eig.eigenvalues().minCoeff();
  k.convexity = ConvexityClass::strongly_convex;
  return k;
}
}  // namespace

FiniteSumObjective::FiniteSumObjective(Matrix component_hessian, std::vector<Vector> centers)
    : Objective(component_hessian.rows(), finite_sum_constants(component_hessian, centers)),
      a_(std::move(component_hessian)) {
  if (centers.empty()) throw InvalidArgument("FiniteSumObjective: need at least one term");
  components_.reserve(centers.size());
  for (auto& c : centers) {
    ObjectiveConstants kc;
    kc.f_star = 0.0;
    kc.x_star = c;
    kc.convexity = ConvexityClass::strongly_convex;
    components_.emplace_back(a_, c, 0.0, std::move(kc), "finite_sum_term");
  }
  // grad f_i - grad f / N = -A (c_i - mean), independent of x.
  const Vector& mean = *constants_.x_star;
  double spread = 0.0;
  for (const auto& comp : components_) spread += (a_ * (comp.center() - mean)).squaredNorm();
  variance_bound_ = static_cast<double>(components_.size()) * spread;
}

double FiniteSumObjective::value(const Vector& x) const {
  double f = 0.0;
  for (const auto& c : components_) f += c.value(x);
  return f;
}

Vector FiniteSumObjective::gradient(const Vector& x) const {
  Vector g = Vector::Zero(dim_);
  for (const auto& c : components_) g += c.gradient(x);
  return g;
}

Matrix FiniteSumObjective::hessian(const Vector& /*x*/) const {
  return a_ * static_cast<double>(components_.size());
}

std::optional<double> FiniteSumObjective::level_diameter(const Vector& x0) const {
  const double gap = std::max(0.0, value(x0) - constants_.f_star);
  return std::sqrt(2.0 * gap / constants_.strong_mu);
}

Vector FiniteSumObjective::component_gradient(std::size_t i, const Vector& x) const {
  return components_.at(i).gradient(x);
}

FiniteSumPtr make_finite_sum(Eigen::Index dim, std::size_t num_terms, double heterogeneity,
                             std::uint64_t seed) {
  if (dim < 1) throw InvalidArgument("make_finite_sum: dim must be >= 1");
  if (num_terms < 1) throw InvalidArgument("make_finite_sum: num_terms must be >= 1");
  if (heterogeneity < 0.0) throw InvalidArgument("make_finite_sum: heterogeneity must be >= 0");

  // Aggregate Hessian has spectrum in [1, 10]; each term carries 1/N of it.
  Vector eigenvalues(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    eigenvalues[i] = dim == 1 ? 1.0 : std::pow(10.0, static_cast<double>(i) / (dim - 1));
  const Matrix r = random_orthogonal(dim, seed);
  Matrix a = r * eigenvalues.asDiagonal() * r.transpose() / static_cast<double>(num_terms);
  a = 0.5 * (a + a.transpose());

  RngStream rng = RngStream(seed).split(1);
  std::vector<Vector> centers;
  centers.reserve(num_terms);
  for (std::size_t i = 0; i < num_terms; ++i)
    centers.push_back(heterogeneity == 0.0 ? Vector::Zero(dim)
                                           : Vector(heterogeneity * rng.normal_vector(dim)));
  return std::make_shared<FiniteSumObjective>(std::move(a), std::move(centers));
}

}  // namespace randopt
