#pragma once

#include <span>
#include <vector>

namespace sandlab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;
};

// Ordinary least squares y = intercept + slope * x; needs >= 2 distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace sandlab
