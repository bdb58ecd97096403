#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sandlab/green.hpp"
#include "sandlab/lattice.hpp"

namespace sandlab {

// n G at 0, e1, 2 e1, e1 + e2.
struct GValues {
  double g0 = 0.0, g1 = 0.0, g2 = 0.0, g3 = 0.0;
};

GValues g_values(const GreenTable& src);
GValues g_values_infinite(int d, double a, int n, double tol = 1e-12);

// a -> 0 limits of g0 - g3 and g2 - g3, from difference integrals at a small a.
struct GbarLimits {
  double gbar03 = 0.0;
  double gbar23 = 0.0;
  double gbar_double_phase = 0.0;  // limit of g0 - n G(2 e1 + 2 e2)
  double a_used = 0.0;
  double abs_error = 0.0;
};
GbarLimits gbar_limits(int d, double a_small = 1e-7);

// q_1 = 0, q_{1+i} = e_i, q_{1+d+i} = -e_i (i = 1..d), zero-based here.
std::vector<Coords> q_vectors(int d);
std::vector<Coords> p0_displacements(int d);
std::vector<Coords> p00_displacements(int d, const Coords& x);

// G_ij(x) = G(x + q_j - q_i).
Eigen::MatrixXd reduced_green_matrix(const GreenTable& src, const Coords& x);
// G_ij(0) rebuilt from g0..g3 (divided by n).
Eigen::MatrixXd reduced_green_matrix(const GValues& gv, int d, int n);

enum class DefectConvention {
  symmetric,   // B(v, 0) = B(0, v)
  first_row,   // couplings in the first row only
};

Eigen::MatrixXd defect_matrix(int d, double a, int n,
                              DefectConvention conv = DefectConvention::symmetric);

// det(E + n G(0) B).
double p0_determinantal(const GreenTable& src, DefectConvention conv = DefectConvention::symmetric);

enum class ClosedFormVariant {
  quadratic_a_tail,  // middle factor ends in -2d g0 a^2
  linear_a_tail,     // middle factor ends in -2d g0 a
};

double p0_closed_form(const GValues& gv, int d, double a, int n,
                      ClosedFormVariant variant = ClosedFormVariant::quadratic_a_tail);

inline constexpr double kC00ReliableThreshold = 1e-10;

struct PairResult {
  double P0 = 0.0;
  double P00 = 0.0;
  double C00 = 0.0;
  bool reliable = false;
};

// P00 = det(E + n G~ B~) by LU. C00 = P00/P0^2 - 1 is evaluated as
// det(E - A^{-1} n G(x) B A^{-1} n G(x)^T B) - 1 with A = E + n G(0) B,
// which is the same quantity without the cancellation.
PairResult p00_c00(const GreenTable& src, const Coords& x);

// Desk-scale determinants over the whole torus: defect blocks centred on
// each of `centres`, dense G_L from the Fourier column.
double full_size_determinant(const ModelParams& p, const std::vector<Coords>& centres,
                             DefectConvention conv = DefectConvention::symmetric);

// Matrix shapes of the 2d+1 dimensional reductions.
struct RParams {
  double u, b, c, q, e, f, v, h, s, t, k;
};

Eigen::MatrixXd r_matrix(const RParams& rp, int d, int n);
// det R through the 4x4 reduction; requires n >= 2.
double r_determinant_reduced(const RParams& rp, int d, int n);

RParams m_params(const GValues& gv, int d, double a);
RParams m_star_params(const GValues& gv, int d, double a, double lambda);

// E + n G(0) B with every column added into the first one.
Eigen::MatrixXd m_matrix(const Eigen::MatrixXd& G0, int d, double a, int n);
// Row-reduced forms of m with e^{+-lambda}, their first-row replacement
// and its rescaling; built entrywise from G(0).
Eigen::MatrixXd m_prime(const Eigen::MatrixXd& G0, int d, double a, int n, double lambda);
Eigen::MatrixXd m_bar(const Eigen::MatrixXd& G0, int d, double a, int n, double lambda);
Eigen::MatrixXd m_star(const Eigen::MatrixXd& G0, int d, double a, int n, double lambda);

// (a c1)^2 det m*(lambda) det m*(-lambda) / (det m)^2.
double c2_factor(const GValues& gv, int d, double a, int n);

// Signed amplitude from the leading rank-one term of the Schur complement:
// C00(x(r)) ~ c2_rank_one * e^{-2r/xi} / r^{d-1}.
double c2_rank_one(const GValues& gv, int d, double a, int n);

struct DecayPoint {
  int k = 0;
  double r = 0.0;
  double value = 0.0;
  bool reliable = true;
};

struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
  double r_lo = 0.0, r_hi = 0.0;
  std::vector<DecayPoint> table;
};

// Fits log(n G(x(r)) r^{(d-1)/2}) against r along the diagonal over [r_lo, r_hi].
DecayFit fit_green_decay(int d, double a, int n, double r_lo, double r_hi, double tol = 1e-12);

// Fits log|C00(x(r)) r^{d-1}| against r for r >= r_lo while |C00| stays reliable.
DecayFit fit_c00_decay(int d, double a, int n, double r_lo, int k_max, double tol = 1e-12);

struct PrefactorFit {
  double last_ratio = 0.0;          // C00 r^{d-1} e^{2r/xi} / c2 at the largest reliable r
  double extrapolated_ratio = 0.0;  // linear fit in 1/r over the tail, at 1/r = 0
  int points = 0;
};

// Compares the exact C00 amplitude along the diagonal with the signed c2.
PrefactorFit c00_prefactor(const DecayFit& c00, int d, double a, double c2_signed);

}  // namespace sandlab
