#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sandlab/lattice.hpp"

namespace sandlab {

enum class GreenMethod { finite_fourier, infinite_bessel, infinite_tensor_quadrature };

std::string to_string(GreenMethod m);

struct GreenValue {
  double value = 0.0;
  double abs_error = 0.0;
};

// G_L(0, x) from the (2L+1)^d-term Fourier sum; x is reduced to its minimal image.
double green_finite(const ModelParams& p, const Coords& x);

// G_L(0, x) for every x, indexed by the flat index of x (OpenMP).
std::vector<double> green_finite_column(const ModelParams& p);

namespace serial {
std::vector<double> green_finite_column(const ModelParams& p);
}

// Infinite-volume G(x) = (1/2dn) int_0^inf e^{-as} prod_i e^{-s/d} I_{x_i}(s/d) ds.
GreenValue green_infinite(int d, double a, int n, const Coords& x, double tol = 1e-10);

// G(x) - G(y) from the pointwise difference of the integrands.
GreenValue green_infinite_difference(int d, double a, int n, const Coords& x, const Coords& y,
                                     double tol = 1e-10);

// G(x) by composite Gauss-Legendre over the Brillouin zone, d = 2 or 3 only.
// The error estimate compares against the rule with every panel halved.
GreenValue green_tensor_quadrature(int d, double a, int n, const Coords& x, int points_per_panel = 20);

// Displacement -> propagator table for fixed (d, a, n). Lookups use the
// symmetry class of the displacement (absolute values, sorted; minimal image
// first for finite tables).
class GreenTable {
 public:
  static GreenTable build_finite(const ModelParams& p, const std::vector<Coords>& displacements);
  static GreenTable build_infinite(int d, double a, int n, const std::vector<Coords>& displacements,
                                   double tol = 1e-10,
                                   GreenMethod method = GreenMethod::infinite_bessel);

  int dim() const { return d_; }
  double a() const { return a_; }
  int n() const { return n_; }
  GreenMethod method() const { return method_; }
  const std::optional<ModelParams>& finite_params() const { return finite_; }
  double tolerance() const { return tol_; }

  bool contains(const Coords& x) const;
  double value(const Coords& x) const;
  double abs_error(const Coords& x) const;
  const std::map<Coords, GreenValue>& entries() const { return entries_; }

  Coords canonical(const Coords& x) const;

 private:
  GreenTable(int d, double a, int n, GreenMethod method, double tol)
      : d_(d), a_(a), n_(n), method_(method), tol_(tol) {}
  const GreenValue& lookup(const Coords& x) const;

  int d_;
  double a_;
  int n_;
  GreenMethod method_;
  double tol_;
  std::optional<ModelParams> finite_;
  std::map<Coords, GreenValue> entries_;
};

struct AsymptoticParams {
  int d = 2;
  double a = 0.0;
  double xi = 0.0;
  double lambda = 0.0;
  double c1 = 0.0;
};

// xi = 1/(sqrt(d) asinh sqrt(a(a+2))), lambda = asinh sqrt(a(a+2)) = 1/(sqrt(d) xi).
AsymptoticParams asymptotic_params(int d, double a);

// (c1/n) e^{-r/xi} / r^{(d-1)/2}.
double gbar(double r, const AsymptoticParams& ap, int n);

// Root s of sum_i sqrt(1 + (d x_i / s)^2) = (1+a) d.
double saddle_point(const Coords& x, int d, double a);
double saddle_residual(const Coords& x, int d, double a, double s);

// (k, ..., k), at distance r = k sqrt(d).
Coords diagonal_point(int d, int k);

}  // namespace sandlab
