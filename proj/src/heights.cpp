#include "sandlab/heights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sandlab/errors.hpp"
#include "sandlab/fit.hpp"

namespace sandlab {

namespace {

Coords unit(int d, int i, int sign = 1) {
  Coords e(d, 0);
  e[i] = sign;
  return e;
}

Coords add(const Coords& x, const Coords& y) {
  Coords z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}

Coords sub(const Coords& x, const Coords& y) {
  Coords z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
  return z;
}

double det(const Eigen::MatrixXd& M) { return M.partialPivLu().determinant(); }

}  // namespace

GValues g_values(const GreenTable& src) {
  const int d = src.dim();
  const double n = src.n();
  return {n * src.value(Coords(d, 0)), n * src.value(unit(d, 0)),
          n * src.value(unit(d, 0, 2)), n * src.value(add(unit(d, 0), unit(d, 1)))};
}

GValues g_values_infinite(int d, double a, int n, double tol) {
  auto t = GreenTable::build_infinite(d, a, n, p0_displacements(d), tol);
  return g_values(t);
}

GbarLimits gbar_limits(int d, double a_small) {
  const Coords zero(d, 0);
  const Coords e11 = add(unit(d, 0), unit(d, 1));
  const Coords two = unit(d, 0, 2);
  GreenValue d03 = green_infinite_difference(d, a_small, 1, zero, e11, 1e-12);
  GreenValue d23 = green_infinite_difference(d, a_small, 1, two, e11, 1e-12);
  Coords e22 = e11;
  for (int& c : e22) c *= 2;
  GreenValue dd = green_infinite_difference(d, a_small, 1, zero, e22, 1e-12);
  return {d03.value, d23.value, dd.value, a_small,
          std::max({d03.abs_error, d23.abs_error, dd.abs_error})};
}

std::vector<Coords> q_vectors(int d) {
  std::vector<Coords> q{Coords(d, 0)};
  for (int i = 0; i < d; ++i) q.push_back(unit(d, i));
  for (int i = 0; i < d; ++i) q.push_back(unit(d, i, -1));
  return q;
}

std::vector<Coords> p0_displacements(int d) {
  std::vector<Coords> out;
  const auto q = q_vectors(d);
  for (const auto& qi : q)
    for (const auto& qj : q) out.push_back(sub(qj, qi));
  out.push_back(unit(d, 0, 2));
  return out;
}

std::vector<Coords> p00_displacements(int d, const Coords& x) {
  auto out = p0_displacements(d);
  const auto q = q_vectors(d);
  for (const auto& qi : q)
    for (const auto& qj : q) out.push_back(add(x, sub(qj, qi)));
  return out;
}

Eigen::MatrixXd reduced_green_matrix(const GreenTable& src, const Coords& x) {
  const int d = src.dim();
  if (static_cast<int>(x.size()) != d) throw InputError("displacement has wrong dimension");
  const auto q = q_vectors(d);
  const int N = 2 * d + 1;
  Eigen::MatrixXd G(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) G(i, j) = src.value(add(x, sub(q[j], q[i])));
  return G;
}

Eigen::MatrixXd reduced_green_matrix(const GValues& gv, int d, int n) {
  const auto q = q_vectors(d);
  const int N = 2 * d + 1;
  Eigen::MatrixXd G(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      Coords v = sub(q[j], q[i]);
      int l1 = 0, nz = 0;
      for (int c : v) l1 += std::abs(c), nz += (c != 0);
      double g = l1 == 0 ? gv.g0 : l1 == 1 ? gv.g1 : nz == 2 ? gv.g3 : gv.g2;
      G(i, j) = g / n;
    }
  }
  return G;
}

Eigen::MatrixXd defect_matrix(int d, double a, int n, DefectConvention conv) {
  const int N = 2 * d + 1;
  const double hc = 2.0 * d * (1.0 + a);
  const double inv_n = 1.0 / n;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N, N);
  B(0, 0) = -hc + inv_n;
  for (int i = 1; i < 2 * d; ++i) {
    B(i, i) = -1.0;
    B(0, i) = 1.0;
  }
  B(N - 1, N - 1) = -1.0 + inv_n;
  B(0, N - 1) = 1.0 - inv_n;
  if (conv == DefectConvention::symmetric)
    for (int i = 1; i < N; ++i) B(i, 0) = B(0, i);
  return B;
}

double p0_determinantal(const GreenTable& src, DefectConvention conv) {
  const int d = src.dim();
  const int N = 2 * d + 1;
  Eigen::MatrixXd G0 = reduced_green_matrix(src, Coords(d, 0));
  Eigen::MatrixXd B = defect_matrix(d, src.a(), src.n(), conv);
  return det(Eigen::MatrixXd::Identity(N, N) + src.n() * G0 * B);
}

double p0_closed_form(const GValues& gv, int d, double a, int n, ClosedFormVariant variant) {
  const double g0 = gv.g0, g2 = gv.g2, g3 = gv.g3;
  const double d03 = g0 - g3;
  const double tail = variant == ClosedFormVariant::quadratic_a_tail ? 2.0 * d * g0 * a * a : 2.0 * d * g0 * a;
  const double first = (1.0 - 2.0 * d * a * g0) / (2.0 * d * n);
  const double middle = 2.0 * (1.0 - d * d03) + (1.0 - 4.0 * d * g0) * a - tail;
  const double last = 2.0 * (d - 1) * d03 - (1.0 - 4.0 * d * g0) * a + 2.0 * d * g0 * a * a;
  const double iso = std::pow((1.0 - d03) * (1.0 - d03) - (g2 - g3) * (g2 - g3), d - 2);
  return first * middle * last * last * iso;
}

PairResult p00_c00(const GreenTable& src, const Coords& x) {
  const int d = src.dim();
  const int N = 2 * d + 1;
  if (static_cast<int>(x.size()) != d) throw InputError("displacement has wrong dimension");
  Coords xr = x;
  if (src.finite_params()) xr = Lattice(*src.finite_params()).min_image(x);
  double norm2 = 0.0;
  for (int c : xr) norm2 += static_cast<double>(c) * c;
  if (norm2 < 4.0) throw InputError("p00_c00 requires |x| >= 2");
  if (src.finite_params() && std::sqrt(norm2) >= src.finite_params()->L())
    throw InputError("p00_c00 on a finite torus requires |x| < L");

  const double n = src.n();
  Eigen::MatrixXd G0 = reduced_green_matrix(src, Coords(d, 0));
  Eigen::MatrixXd Gx = reduced_green_matrix(src, x);
  Eigen::MatrixXd B = defect_matrix(d, src.a(), src.n());
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);
  Eigen::MatrixXd A = I + n * G0 * B;

  Eigen::MatrixXd big(2 * N, 2 * N);
  big << A, n * Gx * B, n * Gx.transpose() * B, A;

  PairResult res;
  auto luA = A.partialPivLu();
  res.P0 = luA.determinant();
  res.P00 = det(big);
  Eigen::MatrixXd K = luA.solve(n * Gx * B) * luA.solve(n * Gx.transpose() * B);
  auto luS = (I - K).partialPivLu();
  const Eigen::MatrixXd& LU = luS.matrixLU();
  double logabs = 0.0;
  for (int i = 0; i < N; ++i) logabs += std::log(std::abs(LU(i, i)));
  double sign = luS.determinant() < 0 ? -1.0 : 1.0;
  res.C00 = sign > 0 ? std::expm1(logabs) : -std::exp(logabs) - 1.0;
  res.reliable = std::abs(res.C00) >= kC00ReliableThreshold;
  return res;
}

double full_size_determinant(const ModelParams& p, const std::vector<Coords>& centres, DefectConvention conv) {
  if (p.sites() > 10000) throw InputError("full-size determinant limited to 1e4 sites");
  Lattice lat(p);
  const SiteIndex Ns = lat.sites();
  const int d = p.d();
  const auto col = green_finite_column(p);
  Eigen::MatrixXd G(Ns, Ns);
  for (SiteIndex s = 0; s < Ns; ++s)
    for (SiteIndex t = 0; t < Ns; ++t) G(s, t) = col[lat.displacement_index(s, t)];
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(Ns, Ns);
  const Eigen::MatrixXd Bred = defect_matrix(d, p.a(), p.n(), conv);
  const auto q = q_vectors(d);
  const SiteIndex origin = lat.index_of(Coords(d, 0));
  for (const auto& c : centres) {
    std::vector<SiteIndex> idx;
    for (const auto& qi : q) idx.push_back(lat.translate(origin, add(c, qi)));
    for (int i = 0; i < 2 * d + 1; ++i)
      for (int j = 0; j < 2 * d + 1; ++j) B(idx[i], idx[j]) += Bred(i, j);
  }
  return det(Eigen::MatrixXd::Identity(Ns, Ns) + p.n() * G * B);
}

Eigen::MatrixXd r_matrix(const RParams& rp, int d, int n) {
  const int N = 2 * d + 1;
  const double w = 1.0 - 1.0 / n;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(N, N);
  for (int I = 1; I <= N; ++I) {
    for (int J = 1; J <= N; ++J) {
      double v = 0.0;
      if (I == 1) {
        v = J == 1 ? rp.u : J <= d + 1 ? rp.b : J <= 2 * d ? rp.c : w * rp.c;
      } else if (I <= d + 1) {
        if (J == 1) v = rp.q;
        else if (J == I) v = 1.0 + rp.v;
        else if (J == 2 * d + 1) v = w * (I == d + 1 ? rp.h : rp.f);
        else if (J == I + d) v = rp.h;
        else v = rp.f;
      } else {
        if (J == 1) v = rp.e;
        else if (J == I - d) v = rp.t;
        else if (J == I && J <= 2 * d) v = 1.0 + rp.k;
        else if (J == 2 * d + 1) v = I == 2 * d + 1 ? 1.0 + w * rp.k : w * rp.s;
        else v = rp.s;
      }
      R(I - 1, J - 1) = v;
    }
  }
  return R;
}

double r_determinant_reduced(const RParams& rp, int d, int n) {
  if (n < 2) throw InputError("the 4x4 reduction needs n >= 2");
  const double w = 1.0 - 1.0 / n;
  const auto& [u, b, c, q, e, f, v, h, s, t, k] = rp;
  Eigen::Matrix4d S;
  S << 1 + v + (d - 1) * f - d * b * q / u, h + (d - 1) * f - d * c * q / u, w * (f - c * q / u), f - b * q / u,
      t + (d - 1) * s - d * b * q / u, 1 + k + (d - 1) * s - d * c * e / u, w * (s - c * e / u), s - b * e / u,
      0.0, 1.0 / (n - 1), 1 + w * (k - s), t - s,
      0.0, 0.0, w * (h - f), 1 + v - f;
  const double inner = 1 + v - f - (t - s) / (1 + k - s) * (h - f);
  return u * std::pow(inner, d - 2) * std::pow(1 + k - s, d - 2) * S.determinant();
}

RParams m_params(const GValues& gv, int d, double a) {
  const auto [g0, g1, g2, g3] = gv;
  RParams rp;
  rp.u = 1 - 2 * d * a * g0;
  rp.b = rp.c = g0 - g1;
  rp.q = rp.e = 1 - 2 * d * a * g1;
  rp.f = rp.s = g1 - g3;
  rp.v = rp.k = g1 - g0;
  rp.h = rp.t = g1 - g2;
  return rp;
}

RParams m_star_params(const GValues& gv, int d, double a, double lambda) {
  const auto [g0, g1, g2, g3] = gv;
  const double ep = std::exp(lambda), em = std::exp(-lambda), sa = std::sqrt(a);
  RParams rp;
  rp.u = -2.0 * d;
  rp.b = (1 - ep) / sa;
  rp.c = (1 - em) / sa;
  rp.q = (1 - ep) / sa - 2 * d * sa * (g1 - ep * g0);
  rp.e = (1 - em) / sa - 2 * d * sa * (g1 - em * g0);
  rp.f = (g1 - g3) - ep * (g0 - g1);
  rp.s = (g1 - g3) - em * (g0 - g1);
  rp.v = (g1 - g0) - ep * (g0 - g1);
  rp.k = (g1 - g0) - em * (g0 - g1);
  rp.h = (g1 - g2) - ep * (g0 - g1);
  rp.t = (g1 - g2) - em * (g0 - g1);
  return rp;
}

Eigen::MatrixXd m_matrix(const Eigen::MatrixXd& G0, int d, double a, int n) {
  const int N = 2 * d + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(N, N) + n * G0 * defect_matrix(d, a, n);
  m.col(0) = m.rowwise().sum();
  return m;
}

namespace {

// phi_{(i1,j1),(i2,j2)} = G_{i1 j1} - G_{i2 j2}, zero-based.
double phi(const Eigen::MatrixXd& G, int i1, int j1, int i2, int j2) { return G(i1, j1) - G(i2, j2); }

double row_factor(int i, int d, double lambda) { return i <= d ? std::exp(lambda) : std::exp(-lambda); }

// Rows 2..2d+1 shared by m'(lambda), m-bar(lambda) and m*(lambda) (columns >= 2).
double lower_entry(const Eigen::MatrixXd& G, int i, int j, int d, int n, double lambda) {
  const int last = 2 * d;
  const double f = row_factor(i, d, lambda);
  const double w = (j == last) ? (1.0 - 1.0 / n) : 1.0;
  const double diag = (i == j) ? 1.0 : 0.0;
  return diag + w * n * (phi(G, i, 0, i, j) - f * phi(G, 0, 0, 0, j));
}

}  // namespace

Eigen::MatrixXd m_prime(const Eigen::MatrixXd& G, int d, double a, int n, double lambda) {
  const int N = 2 * d + 1;
  Eigen::MatrixXd M(N, N);
  M(0, 0) = 1 - 2 * d * a * n * G(0, 0);
  for (int j = 1; j < N; ++j) M(0, j) = (j == N - 1 ? (1.0 - 1.0 / n) : 1.0) * n * phi(G, 0, 0, 0, j);
  for (int i = 1; i < N; ++i) {
    const double f = row_factor(i, d, lambda);
    M(i, 0) = (1 - f) - 2 * d * a * n * (G(i, 0) - f * G(0, 0));
    for (int j = 1; j < N; ++j) M(i, j) = lower_entry(G, i, j, d, n, lambda);
  }
  return M;
}

Eigen::MatrixXd m_bar(const Eigen::MatrixXd& G, int d, double a, int n, double lambda) {
  Eigen::MatrixXd M = m_prime(G, d, a, n, lambda);
  const int N = 2 * d + 1;
  M(0, 0) = -2.0 * d * a;
  for (int j = 1; j <= d; ++j) M(0, j) = 1 - std::exp(lambda);
  for (int j = d + 1; j < N - 1; ++j) M(0, j) = 1 - std::exp(-lambda);
  M(0, N - 1) = (1.0 - 1.0 / n) * (1 - std::exp(-lambda));
  return M;
}

Eigen::MatrixXd m_star(const Eigen::MatrixXd& G, int d, double a, int n, double lambda) {
  const int N = 2 * d + 1;
  const double sa = std::sqrt(a);
  Eigen::MatrixXd M(N, N);
  M(0, 0) = -2.0 * d;
  for (int j = 1; j <= d; ++j) M(0, j) = (1 - std::exp(lambda)) / sa;
  for (int j = d + 1; j < N - 1; ++j) M(0, j) = (1 - std::exp(-lambda)) / sa;
  M(0, N - 1) = (1.0 - 1.0 / n) * (1 - std::exp(-lambda)) / sa;
  for (int i = 1; i < N; ++i) {
    const double f = row_factor(i, d, lambda);
    M(i, 0) = (1 - f) / sa - 2 * d * sa * n * (G(i, 0) - f * G(0, 0));
    for (int j = 1; j < N; ++j) M(i, j) = lower_entry(G, i, j, d, n, lambda);
  }
  return M;
}

double c2_factor(const GValues& gv, int d, double a, int n) {
  const AsymptoticParams ap = asymptotic_params(d, a);
  const double dm = det(r_matrix(m_params(gv, d, a), d, n));
  if (std::abs(dm) < 1e-300) throw NumericalError("c2_factor: det m vanishes", dm);
  const double sp = det(r_matrix(m_star_params(gv, d, a, ap.lambda), d, n));
  const double sm = det(r_matrix(m_star_params(gv, d, a, -ap.lambda), d, n));
  return (a * ap.c1) * (a * ap.c1) * sp * sm / (dm * dm);
}

double c2_rank_one(const GValues& gv, int d, double a, int n) {
  const AsymptoticParams ap = asymptotic_params(d, a);
  const int N = 2 * d + 1;
  const Eigen::MatrixXd G0 = reduced_green_matrix(gv, d, n);
  const Eigen::MatrixXd B = defect_matrix(d, a, n);
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(N, N) + n * G0 * B;
  const auto q = q_vectors(d);
  Eigen::VectorXd w(N), u(N);
  for (int i = 0; i < N; ++i) {
    int sigma = 0;
    for (int c : q[i]) sigma += c;
    w(i) = std::exp(ap.lambda * sigma);
    u(i) = std::exp(-ap.lambda * sigma);
  }
  auto lu = A.partialPivLu();
  const double ww = w.dot(B * lu.solve(w));
  const double uu = u.dot(B * lu.solve(u));
  return -ap.c1 * ap.c1 * ww * uu;
}

DecayFit fit_green_decay(int d, double a, int n, double r_lo, double r_hi, double tol) {
  const double sd = std::sqrt(static_cast<double>(d));
  const int k_lo = std::max(1, static_cast<int>(std::ceil(r_lo / sd)));
  const int k_hi = static_cast<int>(std::floor(r_hi / sd));
  if (k_hi - k_lo + 1 < 4) throw InputError("decay fit window holds fewer than 4 lattice points");
  std::vector<Coords> xs;
  for (int k = k_lo; k <= k_hi; ++k) xs.push_back(diagonal_point(d, k));
  auto table = GreenTable::build_infinite(d, a, n, xs, tol);
  DecayFit fit;
  std::vector<double> rs, ys;
  for (int k = k_lo; k <= k_hi; ++k) {
    double r = k * sd;
    double g = n * table.value(diagonal_point(d, k));
    fit.table.push_back({k, r, g, true});
    rs.push_back(r);
    ys.push_back(std::log(g * std::pow(r, 0.5 * (d - 1))));
  }
  LinearFit lf = linear_fit(rs, ys);
  fit.rate = -lf.slope;
  fit.intercept = lf.intercept;
  fit.r_squared = lf.r_squared;
  fit.points = static_cast<int>(rs.size());
  fit.r_lo = rs.front();
  fit.r_hi = rs.back();
  return fit;
}

DecayFit fit_c00_decay(int d, double a, int n, double r_lo, int k_max, double tol) {
  const double sd = std::sqrt(static_cast<double>(d));
  const int k_lo = std::max(2, static_cast<int>(std::ceil(r_lo / sd)));
  if (k_max < k_lo + 3) throw InputError("decay fit window holds fewer than 4 lattice points");
  std::vector<Coords> xs;
  for (int k = k_lo; k <= k_max; ++k) {
    auto more = p00_displacements(d, diagonal_point(d, k));
    xs.insert(xs.end(), more.begin(), more.end());
  }
  auto table = GreenTable::build_infinite(d, a, n, xs, tol);
  DecayFit fit;
  std::vector<double> rs, ys;
  bool open = true;
  for (int k = k_lo; k <= k_max; ++k) {
    double r = k * sd;
    PairResult pr = p00_c00(table, diagonal_point(d, k));
    bool ok = open && pr.reliable;
    if (!pr.reliable) open = false;
    fit.table.push_back({k, r, pr.C00, ok});
    if (ok) {
      rs.push_back(r);
      ys.push_back(std::log(std::abs(pr.C00) * std::pow(r, d - 1)));
    }
  }
  if (rs.size() < 4) throw NumericalError("fewer than 4 reliable C00 points in the fit window", rs.size());
  LinearFit lf = linear_fit(rs, ys);
  fit.rate = -lf.slope;
  fit.intercept = lf.intercept;
  fit.r_squared = lf.r_squared;
  fit.points = static_cast<int>(rs.size());
  fit.r_lo = rs.front();
  fit.r_hi = rs.back();
  return fit;
}

PrefactorFit c00_prefactor(const DecayFit& c00, int d, double a, double c2_signed) {
  const AsymptoticParams ap = asymptotic_params(d, a);
  std::vector<double> inv_r, ratio;
  for (const auto& pt : c00.table) {
    if (!pt.reliable) continue;
    inv_r.push_back(1.0 / pt.r);
    ratio.push_back(pt.value * std::pow(pt.r, d - 1) * std::exp(2.0 * pt.r / ap.xi) / c2_signed);
  }
  if (ratio.size() < 4) throw NumericalError("too few reliable points for the prefactor fit", ratio.size());
  PrefactorFit pf;
  pf.last_ratio = ratio.back();
  const std::size_t half = ratio.size() / 2;
  std::vector<double> xs(inv_r.begin() + half, inv_r.end()), ys(ratio.begin() + half, ratio.end());
  if (xs.size() < 3) {
    xs.assign(inv_r.end() - 3, inv_r.end());
    ys.assign(ratio.end() - 3, ratio.end());
  }
  pf.extrapolated_ratio = linear_fit(xs, ys).intercept;
  pf.points = static_cast<int>(xs.size());
  return pf;
}

}  // namespace sandlab
