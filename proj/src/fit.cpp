#include "sandlab/fit.hpp"

#include "sandlab/errors.hpp"

namespace sandlab {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("linear_fit: x and y differ in length");
  const std::size_t N = x.size();
  if (N < 2) throw InputError("linear_fit: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < N; ++i) mx += x[i], my += y[i];
  mx /= N;
  my /= N;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InputError("linear_fit: all x values coincide");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  f.residuals.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    f.residuals[i] = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += f.residuals[i] * f.residuals[i];
  }
  f.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

}  // namespace sandlab
