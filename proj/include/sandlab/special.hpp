#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sandlab {

// e^{-z} I_order(z) for order >= 0, z >= 0.
double scaled_bessel(int order, double z);

// out[k] = e^{-z} I_k(z) for k = 0..max_order; out.size() must be max_order + 1.
void scaled_bessel_sequence(int max_order, double z, std::span<double> out);

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

GaussLegendreRule make_gauss_legendre(int points);

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int panels = 0;
};

// Globally adaptive 15-point Gauss-Legendre. Each panel is compared with its
// two halves; the worst panel is bisected until the summed disagreement is
// below abs_tol. `breakpoints` (ascending, at least two) seed the panels.
// Throws NumericalError when the panel budget runs out.
QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              std::span<const double> breakpoints, double abs_tol,
                              int max_panels = 20000);

}  // namespace sandlab
