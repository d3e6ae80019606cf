#pragma once

#include <vector>

namespace randopt {

enum class ScalingModel { power, log };

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least-squares fit against log(1/eps): `power` regresses log(mean), `log`
/// regresses mean itself. Needs at least three points and positive means.
ScalingFit fit_scaling_exponent(const std::vector<double>& eps, const std::vector<double>& means,
                                ScalingModel model);

}  // namespace randopt
