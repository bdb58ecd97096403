#include "sandlab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sandlab/errors.hpp"
#include "sandlab/green.hpp"
#include "sandlab/heights.hpp"

namespace sandlab {

namespace {

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw InputError("cannot parse number '" + s + "'");
  }
  if (pos != s.size()) throw InputError("cannot parse number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

std::vector<double> parse_a_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    auto parts = split(text, ':');
    if (parts.size() < 3 || parts.size() > 4 || parts[2] != "log")
      throw InputError("a-grid must look like hi:lo:log or hi:lo:log:points_per_decade");
    double hi = parse_double(parts[0]), lo = parse_double(parts[1]);
    int per = parts.size() == 4 ? static_cast<int>(parse_double(parts[3])) : 5;
    if (!(hi > 0 && lo > 0) || per < 1) throw InputError("a-grid bounds must be > 0");
    if (hi < lo) std::swap(hi, lo);
    const double decades = std::log10(hi / lo);
    const int steps = std::max(1, static_cast<int>(std::lround(decades * per)));
    for (int i = 0; i <= steps; ++i) out.push_back(hi * std::pow(lo / hi, static_cast<double>(i) / steps));
  } else {
    for (const auto& s : split(text, ',')) out.push_back(parse_double(s));
    std::sort(out.begin(), out.end(), std::greater<>());
  }
  for (double a : out)
    if (!(a > 0.0)) throw InputError("a values must be > 0");
  return out;
}

FitResult fit_power_law(std::span<const double> a, std::span<const double> xi) {
  if (a.size() != xi.size()) throw InputError("fit_power_law: size mismatch");
  if (a.size() < 4) throw InputError("fit needs at least 4 points, got " + std::to_string(a.size()));
  std::vector<double> la, lx;
  for (std::size_t i = 0; i < a.size(); ++i) {
    la.push_back(std::log(a[i]));
    lx.push_back(std::log(xi[i]));
  }
  LinearFit lf = linear_fit(la, lx);
  FitResult r;
  r.nu_a = -lf.slope;
  r.prefactor = std::exp(lf.intercept);
  r.r_squared = lf.r_squared;
  r.residuals = lf.residuals;
  r.a.assign(a.begin(), a.end());
  r.xi.assign(xi.begin(), xi.end());
  return r;
}

FitResult xi_sweep_and_fit(const SweepSpec& spec) {
  if (spec.d < 2) throw InputError("dimension must be >= 2");
  for (std::size_t i = 0; i < spec.a_values.size(); ++i) {
    if (!(spec.a_values[i] > 0.0)) throw InputError("a values must be > 0");
    if (i > 0 && !(spec.a_values[i] < spec.a_values[i - 1])) throw InputError("a values must be strictly descending");
  }
  if (!(spec.fit_min <= spec.fit_max)) throw InputError("fit window is empty");
  std::vector<double> a, xi(spec.a_values.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < spec.a_values.size(); ++i) xi[i] = asymptotic_params(spec.d, spec.a_values[i]).xi;
  std::vector<double> xi_in;
  for (std::size_t i = 0; i < spec.a_values.size(); ++i) {
    double v = spec.a_values[i];
    if (v >= spec.fit_min * (1 - 1e-12) && v <= spec.fit_max * (1 + 1e-12)) {
      a.push_back(v);
      xi_in.push_back(xi[i]);
    }
  }
  return fit_power_law(a, xi_in);
}

double scaling_function_G(int d, double kappa) {
  return std::pow(2.0, -(d + 1) / 2.0) * std::pow(std::numbers::pi, -(d - 1) / 2.0) *
         std::pow(kappa, (d - 3) / 2.0) * std::exp(-kappa);
}

double scaling_function_C(int d, double kappa, double gbar) {
  const double br = (1.0 + (d - 1) * gbar) / ((d - 1) * gbar);
  return std::pow(2.0, -(d + 1)) * std::pow(std::numbers::pi, -(d - 1)) * br * br * std::pow(kappa, d + 1) *
         std::exp(-2.0 * kappa);
}

std::vector<ScalingRow> scaling_function_check(int d, std::span<const double> kappas,
                                               std::span<const double> a_values, bool with_c00) {
  for (double kp : kappas)
    if (!(kp > 0.5 && kp < 5.0)) throw InputError("kappa values must lie in (0.5, 5)");
  const double sd = std::sqrt(static_cast<double>(d));
  struct Point {
    double kappa_target, a;
    int k;
  };
  std::vector<Point> pts;
  for (double kp : kappas)
    for (double a : a_values) {
      int k = std::max(1, static_cast<int>(std::lround(kp / (std::sqrt(2.0 * d * a) * sd))));
      pts.push_back({kp, a, k});
    }

  double gbar03 = 0.0, gbar_double = 0.0;
  if (with_c00) {
    GbarLimits gl = gbar_limits(d);
    gbar03 = gl.gbar03;
    gbar_double = gl.gbar_double_phase;
  }

  std::vector<std::vector<ScalingRow>> rows(pts.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [kt, a, k] = pts[i];
    const Coords x = diagonal_point(d, k);
    const double r = k * sd;
    const double kappa = std::sqrt(2.0 * d * a) * r;
    std::vector<Coords> xs = with_c00 ? p00_displacements(d, x) : std::vector<Coords>{x};
    auto table = GreenTable::build_infinite(d, a, 1, xs, 1e-12);
    ScalingRow g{"G", kt, a, k, r, kappa, 0, 0, 0, true, ""};
    g.lattice_value = std::pow(r, d - 2) * table.value(x);
    g.scaling_value = scaling_function_G(d, kappa);
    g.ratio = g.lattice_value / g.scaling_value;
    rows[i].push_back(g);
    if (with_c00) {
      double c00 = 0.0;
      bool ok = false;
      if (k * k * d >= 4) {
        PairResult pr = p00_c00(table, x);
        c00 = pr.C00;
        ok = pr.reliable;
      }
      for (auto [name, gb] : {std::pair{"gbar03", gbar03}, std::pair{"double_phase", gbar_double}}) {
        ScalingRow c{"C00", kt, a, k, r, kappa, 0, 0, 0, ok, name};
        c.lattice_value = std::pow(r, 2 * d) * std::abs(c00);
        c.scaling_value = scaling_function_C(d, kappa, gb);
        c.ratio = c.lattice_value / c.scaling_value;
        rows[i].push_back(c);
      }
    }
  }
  std::vector<ScalingRow> out;
  for (auto& v : rows) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace sandlab
