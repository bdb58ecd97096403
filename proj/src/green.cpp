#include "sandlab/green.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "sandlab/errors.hpp"
#include "sandlab/special.hpp"

namespace sandlab {

std::string to_string(GreenMethod m) {
  switch (m) {
    case GreenMethod::finite_fourier: return "finite_fourier";
    case GreenMethod::infinite_bessel: return "infinite_bessel";
    case GreenMethod::infinite_tensor_quadrature: return "infinite_tensor_quadrature";
  }
  return "unknown";
}

namespace {

struct FourierTables {
  int P, d;
  std::vector<double> cos_phase;  // cos(2 pi j / P), j in [0, P)
  std::vector<double> inv_den;    // per mode, flat index over shifted coords
  std::vector<int> mode_coord;    // sites x d, shifted coords in [0, P)
  double scale;
};

FourierTables make_tables(const ModelParams& p) {
  FourierTables t;
  t.P = p.period();
  t.d = p.d();
  t.cos_phase.resize(t.P);
  for (int j = 0; 2 * j <= t.P; ++j) {
    t.cos_phase[j] = std::cos(2.0 * std::numbers::pi * j / t.P);
    t.cos_phase[(t.P - j) % t.P] = t.cos_phase[j];
  }
  const std::int64_t N = p.sites();
  t.inv_den.resize(N);
  t.mode_coord.resize(N * t.d);
  for (std::int64_t k = 0; k < N; ++k) {
    std::int64_t rem = k;
    double c = 0.0;
    for (int i = t.d - 1; i >= 0; --i) {
      int ki = static_cast<int>(rem % t.P);
      rem /= t.P;
      t.mode_coord[k * t.d + i] = ki;
      c += t.cos_phase[ki];
    }
    t.inv_den[k] = 1.0 / ((1.0 + p.a()) - c / t.d);
  }
  t.scale = 1.0 / (2.0 * t.d * p.n() * static_cast<double>(N));
  return t;
}

double fourier_sum(const FourierTables& t, const int* x) {
  double s = 0.0;
  const std::int64_t N = static_cast<std::int64_t>(t.inv_den.size());
  for (std::int64_t k = 0; k < N; ++k) {
    long phase = 0;
    for (int i = 0; i < t.d; ++i) phase += static_cast<long>(x[i]) * t.mode_coord[k * t.d + i];
    phase %= t.P;
    if (phase < 0) phase += t.P;
    s += t.cos_phase[phase] * t.inv_den[k];
  }
  return s * t.scale;
}

}  // namespace

double green_finite(const ModelParams& p, const Coords& x) {
  Lattice lat(p);
  Coords y = lat.min_image(x);
  return fourier_sum(make_tables(p), y.data());
}

std::vector<double> green_finite_column(const ModelParams& p) {
  const auto t = make_tables(p);
  const std::int64_t N = p.sites();
  std::vector<double> out(N);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t j = 0; j < N; ++j) {
    Coords x(t.d);
    for (int i = 0; i < t.d; ++i) x[i] = t.mode_coord[j * t.d + i] - p.L();
    out[j] = fourier_sum(t, x.data());
  }
  return out;
}

namespace serial {
std::vector<double> green_finite_column(const ModelParams& p) {
  const auto t = make_tables(p);
  std::vector<double> out(p.sites());
  Coords x(t.d);
  for (std::int64_t j = 0; j < p.sites(); ++j) {
    for (int i = 0; i < t.d; ++i) x[i] = t.mode_coord[j * t.d + i] - p.L();
    out[j] = fourier_sum(t, x.data());
  }
  return out;
}
}  // namespace serial

namespace {

void check_infinite_args(int d, double a, int n, double tol) {
  if (d < 2) throw InputError("dimension must be >= 2");
  if (!(a > 0.0) || !std::isfinite(a)) throw InputError("dissipation rate a must be > 0");
  if (n < 1) throw InputError("n must be >= 1");
  if (!(tol >= 1e-12)) throw InputError("tolerance must be >= 1e-12");
}

double tail_bound(double a, int d, double S) { return std::exp(-a * S) / (a * std::pow(S, 0.5 * d)); }

double choose_smax(double a, int d, double tol) {
  double S = std::max(50.0, 40.0 / a);
  while (tail_bound(a, d, S) >= 0.1 * tol) S *= 2.0;
  return S;
}

std::vector<double> seed_breakpoints(double S) {
  std::vector<double> b{0.0};
  for (double x = 1.0; x < S; x *= 2.0) b.push_back(x);
  b.push_back(S);
  return b;
}

// e^{-as} sum_j sign_j prod_i e^{-s/d} I_{|x_ji|}(s/d)
struct BesselIntegrand {
  int d;
  double a;
  std::vector<Coords> terms;
  std::vector<double> signs;
  int max_order = 0;

  double operator()(double s) const {
    std::vector<double> seq(max_order + 1);
    scaled_bessel_sequence(max_order, s / d, seq);
    double acc = 0.0;
    for (std::size_t j = 0; j < terms.size(); ++j) {
      double prod = signs[j];
      for (int c : terms[j]) prod *= seq[std::abs(c)];
      acc += prod;
    }
    return std::exp(-a * s) * acc;
  }
};

GreenValue integrate_bessel(int d, double a, int n, BesselIntegrand f, double tol) {
  for (const auto& t : f.terms) {
    if (static_cast<int>(t.size()) != d) throw InputError("displacement has wrong dimension");
    for (int c : t) f.max_order = std::max(f.max_order, std::abs(c));
  }
  const double scale = 2.0 * d * n;
  const double S = choose_smax(a, d, tol * scale);
  const auto bp = seed_breakpoints(S);
  QuadResult q = integrate_adaptive(std::cref(f), bp, 0.5 * tol * scale);
  double tail = tail_bound(a, d, S) * static_cast<double>(f.terms.size());
  return {q.value / scale, (q.abs_error + tail) / scale};
}

}  // namespace

GreenValue green_infinite(int d, double a, int n, const Coords& x, double tol) {
  check_infinite_args(d, a, n, tol);
  return integrate_bessel(d, a, n, BesselIntegrand{d, a, {x}, {1.0}}, tol);
}

GreenValue green_infinite_difference(int d, double a, int n, const Coords& x, const Coords& y, double tol) {
  check_infinite_args(d, a, n, tol);
  return integrate_bessel(d, a, n, BesselIntegrand{d, a, {x, y}, {1.0, -1.0}}, tol);
}

namespace {

struct AxisRule {
  std::vector<double> theta, weight, cos_theta;
};

AxisRule axis_rule(double a, int d, int points, bool refined) {
  const double scale = std::sqrt(2.0 * d * a);
  std::vector<double> bp{std::numbers::pi};
  while (bp.back() > 0.5 * scale && bp.back() > 1e-6) bp.push_back(0.5 * bp.back());
  bp.push_back(0.0);
  std::reverse(bp.begin(), bp.end());
  std::vector<double> edges{0.0};
  for (std::size_t i = 1; i < bp.size(); ++i) {
    int parts = std::max(1, static_cast<int>(std::ceil((bp[i] - bp[i - 1]) / (std::numbers::pi / 8))));
    if (refined) parts *= 2;
    for (int j = 1; j <= parts; ++j) edges.push_back(bp[i - 1] + (bp[i] - bp[i - 1]) * j / parts);
  }
  const GaussLegendreRule gl = make_gauss_legendre(points);
  AxisRule r;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double c = 0.5 * (edges[i] + edges[i + 1]), h = 0.5 * (edges[i + 1] - edges[i]);
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      double th = c + h * gl.nodes[j];
      r.theta.push_back(th);
      r.weight.push_back(h * gl.weights[j]);
      r.cos_theta.push_back(std::cos(th));
    }
  }
  return r;
}

double tensor_rule(int d, double a, const Coords& x, const AxisRule& r) {
  const std::size_t M = r.theta.size();
  std::vector<std::vector<double>> wc(d, std::vector<double>(M));
  for (int i = 0; i < d; ++i)
    for (std::size_t j = 0; j < M; ++j) wc[i][j] = r.weight[j] * std::cos(x[i] * r.theta[j]);
  const double inv_d = 1.0 / d;
  const double base = 1.0 + a;
  double total = 0.0;
  if (d == 2) {
#pragma omp parallel for reduction(+ : total) schedule(static)
    for (std::size_t j0 = 0; j0 < M; ++j0) {
      double acc = 0.0;
      for (std::size_t j1 = 0; j1 < M; ++j1)
        acc += wc[1][j1] / (base - inv_d * (r.cos_theta[j0] + r.cos_theta[j1]));
      total += wc[0][j0] * acc;
    }
  } else {
#pragma omp parallel for reduction(+ : total) schedule(static)
    for (std::size_t j0 = 0; j0 < M; ++j0) {
      double outer = 0.0;
      for (std::size_t j1 = 0; j1 < M; ++j1) {
        double acc = 0.0;
        double c01 = r.cos_theta[j0] + r.cos_theta[j1];
        for (std::size_t j2 = 0; j2 < M; ++j2) acc += wc[2][j2] / (base - inv_d * (c01 + r.cos_theta[j2]));
        outer += wc[1][j1] * acc;
      }
      total += wc[0][j0] * outer;
    }
  }
  return total / std::pow(std::numbers::pi, d);
}

}  // namespace

GreenValue green_tensor_quadrature(int d, double a, int n, const Coords& x, int points_per_panel) {
  if (d != 2 && d != 3) throw InputError("tensor quadrature is available for d = 2 and d = 3 only");
  check_infinite_args(d, a, n, 1e-12);
  if (static_cast<int>(x.size()) != d) throw InputError("displacement has wrong dimension");
  double coarse = tensor_rule(d, a, x, axis_rule(a, d, points_per_panel, false));
  double fine = tensor_rule(d, a, x, axis_rule(a, d, points_per_panel, true));
  const double scale = 2.0 * d * n;
  return {fine / scale, std::abs(fine - coarse) / scale};
}

Coords GreenTable::canonical(const Coords& x) const {
  if (static_cast<int>(x.size()) != d_) throw InputError("displacement has wrong dimension");
  Coords y = finite_ ? Lattice(*finite_).min_image(x) : x;
  for (int& c : y) c = std::abs(c);
  std::sort(y.begin(), y.end());
  return y;
}

GreenTable GreenTable::build_finite(const ModelParams& p, const std::vector<Coords>& displacements) {
  GreenTable t(p.d(), p.a(), p.n(), GreenMethod::finite_fourier, 1e-13);
  t.finite_ = p;
  std::vector<Coords> keys;
  for (const auto& x : displacements) keys.push_back(t.canonical(x));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  const auto tab = make_tables(p);
  std::vector<double> vals(keys.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < keys.size(); ++i) vals[i] = fourier_sum(tab, keys[i].data());
  for (std::size_t i = 0; i < keys.size(); ++i) t.entries_[keys[i]] = {vals[i], 1e-14 * std::abs(vals[i])};
  return t;
}

GreenTable GreenTable::build_infinite(int d, double a, int n, const std::vector<Coords>& displacements,
                                      double tol, GreenMethod method) {
  if (method == GreenMethod::finite_fourier) throw InputError("build_infinite: finite method requested");
  check_infinite_args(d, a, n, tol);
  GreenTable t(d, a, n, method, tol);
  std::vector<Coords> keys;
  for (const auto& x : displacements) keys.push_back(t.canonical(x));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<GreenValue> vals(keys.size());
  std::string failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < keys.size(); ++i) {
    try {
      vals[i] = method == GreenMethod::infinite_bessel ? green_infinite(d, a, n, keys[i], tol)
                                                       : green_tensor_quadrature(d, a, n, keys[i]);
    } catch (const std::exception& e) {
#pragma omp critical
      failure = e.what();
    }
  }
  if (!failure.empty()) throw NumericalError("GreenTable: " + failure, 0.0);
  for (std::size_t i = 0; i < keys.size(); ++i) t.entries_[keys[i]] = vals[i];
  return t;
}

bool GreenTable::contains(const Coords& x) const { return entries_.count(canonical(x)) > 0; }

const GreenValue& GreenTable::lookup(const Coords& x) const {
  auto it = entries_.find(canonical(x));
  if (it == entries_.end()) {
    std::string s = "GreenTable: displacement (";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
    throw InputError(s + ") not in table");
  }
  return it->second;
}

double GreenTable::value(const Coords& x) const { return lookup(x).value; }
double GreenTable::abs_error(const Coords& x) const { return lookup(x).abs_error; }

AsymptoticParams asymptotic_params(int d, double a) {
  if (d < 2) throw InputError("dimension must be >= 2");
  if (!(a > 0.0)) throw InputError("dissipation rate a must be > 0");
  AsymptoticParams ap;
  ap.d = d;
  ap.a = a;
  const double root = std::sqrt(a * (a + 2.0));
  ap.lambda = std::asinh(root);
  ap.xi = 1.0 / (std::sqrt(static_cast<double>(d)) * ap.lambda);
  ap.c1 = 1.0 / (4.0 * std::numbers::pi * (a + 1.0)) *
          std::pow(std::sqrt(a * (a + 2.0) * d) / (2.0 * std::numbers::pi * (a + 1.0)), 0.5 * (d - 3));
  return ap;
}

double gbar(double r, const AsymptoticParams& ap, int n) {
  if (!(r > 0.0)) throw InputError("gbar: r must be > 0");
  return ap.c1 / n * std::exp(-r / ap.xi) / std::pow(r, 0.5 * (ap.d - 1));
}

double saddle_residual(const Coords& x, int d, double a, double s) {
  double sum = 0.0;
  for (int c : x) {
    double u = (static_cast<double>(d) * c) / s;
    sum += std::sqrt(1.0 + u * u);
  }
  return sum - (1.0 + a) * d;
}

double saddle_point(const Coords& x, int d, double a) {
  if (static_cast<int>(x.size()) != d) throw InputError("saddle_point: displacement has wrong dimension");
  if (!(a > 0.0)) throw InputError("saddle_point: a must be > 0");
  int M = 0;
  for (int c : x) M = std::max(M, std::abs(c));
  if (M == 0) throw InputError("saddle_point: x must be nonzero");
  double lo = M / (1.0 + a);
  double hi = 2.0 * d * M / std::sqrt(a * (a + 2.0));
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (saddle_residual(x, d, a, mid) > 0.0) lo = mid;
    else hi = mid;
  }
  double s = 0.5 * (lo + hi);
  double deriv = 0.0;
  for (int c : x) {
    double u = (static_cast<double>(d) * c) / s;
    deriv -= u * u / (s * std::sqrt(1.0 + u * u));
  }
  if (deriv != 0.0) s -= saddle_residual(x, d, a, s) / deriv;
  return s;
}

Coords diagonal_point(int d, int k) { return Coords(d, k); }

}  // namespace sandlab
