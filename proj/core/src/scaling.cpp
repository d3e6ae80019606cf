#include "randopt/scaling.hpp"

#include <cmath>

#include "randopt/types.hpp"

namespace randopt {

ScalingFit fit_scaling_exponent(const std::vector<double>& eps, const std::vector<double>& means,
                                ScalingModel model) {
  if (eps.size() != means.size()) throw InvalidArgument("eps and means differ in length");
  const std::size_t n = eps.size();
  if (n < 3) throw InvalidArgument("scaling fit needs at least three points");
  Vector x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(eps[i] > 0.0)) throw InvalidArgument("eps must be positive");
    if (!(means[i] > 0.0)) throw InvalidArgument("means must be positive");
    x(i) = std::log(1.0 / eps[i]);
    y(i) = model == ScalingModel::power ? std::log(means[i]) : means[i];
  }
  const double xm = x.mean(), ym = y.mean();
  const Vector dx = x.array() - xm, dy = y.array() - ym;
  const double sxx = dx.squaredNorm();
  if (!(sxx > 0.0)) throw InvalidArgument("eps values must not all coincide");
  ScalingFit fit;
  fit.slope = dx.dot(dy) / sxx;
  fit.intercept = ym - fit.slope * xm;
  const double syy = dy.squaredNorm();
  const double sse = (dy - fit.slope * dx).squaredNorm();
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

}  // namespace randopt
