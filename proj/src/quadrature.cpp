#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "sandlab/errors.hpp"
#include "sandlab/special.hpp"

namespace sandlab {

GaussLegendreRule make_gauss_legendre(int points) {
  if (points < 1) throw InputError("Gauss-Legendre rule needs at least one point");
  GaussLegendreRule r;
  r.nodes.resize(points);
  r.weights.resize(points);
  for (int i = 0; i < (points + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= points; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[points - 1 - i] = x;
    r.weights[i] = w;
    r.weights[points - 1 - i] = w;
  }
  return r;
}

namespace {

struct Panel {
  double lo, hi, left, right, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              std::span<const double> breakpoints, double abs_tol, int max_panels) {
  if (breakpoints.size() < 2) throw InputError("integrate_adaptive: need at least two breakpoints");
  static const GaussLegendreRule rule = make_gauss_legendre(15);
  auto gl = [&](double lo, double hi) {
    double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo), s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(c + h * rule.nodes[i]);
    return s * h;
  };
  auto make = [&](double lo, double hi, double whole) {
    double mid = 0.5 * (lo + hi);
    double l = gl(lo, mid), r = gl(mid, hi);
    return Panel{lo, hi, l, r, std::abs(whole - (l + r))};
  };

  std::priority_queue<Panel> heap;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    double lo = breakpoints[i], hi = breakpoints[i + 1];
    if (!(hi > lo)) throw InputError("integrate_adaptive: breakpoints must be strictly ascending");
    heap.push(make(lo, hi, gl(lo, hi)));
  }
  auto totals = [&heap]() {
    auto copy = heap;
    double v = 0.0, e = 0.0;
    while (!copy.empty()) {
      v += copy.top().left + copy.top().right;
      e += copy.top().err;
      copy.pop();
    }
    return std::pair{v, e};
  };

  double err = 0.0;
  {
    auto copy = heap;
    while (!copy.empty()) err += copy.top().err, copy.pop();
  }
  int panels = static_cast<int>(heap.size());
  while (err > abs_tol) {
    if (panels >= max_panels) {
      auto [v, e] = totals();
      throw NumericalError("adaptive quadrature: panel budget exhausted with error estimate " +
                               std::to_string(e),
                           e);
    }
    Panel p = heap.top();
    heap.pop();
    double mid = 0.5 * (p.lo + p.hi);
    Panel a = make(p.lo, mid, p.left);
    Panel b = make(mid, p.hi, p.right);
    err += a.err + b.err - p.err;
    heap.push(a);
    heap.push(b);
    ++panels;
    if (err <= abs_tol) err = totals().second;  // guard against drift in the running sum
  }
  auto [value, e] = totals();
  return {value, e, panels};
}

}  // namespace sandlab
