#pragma once

#include <span>
#include <string>
#include <vector>

#include "sandlab/fit.hpp"

namespace sandlab {

struct SweepSpec {
  int d = 2;
  std::vector<double> a_values;  // strictly positive, descending
  double fit_min = 0.0;          // fit window [fit_min, fit_max] in a
  double fit_max = 0.0;
};

// "hi:lo:log" or "hi:lo:log:points_per_decade" (default 5), or a comma list.
std::vector<double> parse_a_grid(const std::string& text);

struct FitResult {
  double nu_a = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  std::vector<double> a;
  std::vector<double> xi;
  std::vector<double> residuals;
};

// log xi = log prefactor - nu_a log a over the points inside the window.
FitResult fit_power_law(std::span<const double> a, std::span<const double> xi);

FitResult xi_sweep_and_fit(const SweepSpec& spec);

// 2^{-(d+1)/2} pi^{-(d-1)/2} kappa^{(d-3)/2} e^{-kappa}.
double scaling_function_G(int d, double kappa);
// 2^{-(d+1)} pi^{-(d-1)} [(1+(d-1)g)/((d-1)g)]^2 kappa^{d+1} e^{-2 kappa}.
double scaling_function_C(int d, double kappa, double gbar);

struct ScalingRow {
  std::string quantity;  // "G" or "C00"
  double kappa_target = 0.0;
  double a = 0.0;
  int k = 0;
  double r = 0.0;
  double kappa = 0.0;  // achieved
  double lattice_value = 0.0;
  double scaling_value = 0.0;
  double ratio = 0.0;
  bool reliable = true;
  std::string gbar_variant;  // for C00 rows
};

// For each kappa and a: k = round(kappa / (sqrt(2d a) sqrt(d))), r = k sqrt(d).
// G rows compare r^{d-2} n G(x(r)) with F_G(kappa); C00 rows compare
// |r^{2d} C00| with F_C(kappa) for both gbar readings.
std::vector<ScalingRow> scaling_function_check(int d, std::span<const double> kappas,
                                               std::span<const double> a_values, bool with_c00 = true);

}  // namespace sandlab
