#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sandlab/errors.hpp"
#include "sandlab/special.hpp"

using namespace sandlab;

namespace {

struct Ref {
  int order;
  double z;
  double value;
};

const Ref kReference[] = {
#include "bessel_reference.inc"
};

// (1/pi) int_0^pi exp(z (cos t - 1)) cos(k t) dt by the periodic trapezoid rule.
double cosine_integral(int k, double z, int points = 8192) {
  long double s = 0.0L;
  for (int j = 0; j < points; ++j) {
    const long double t = std::numbers::pi_v<long double> * 2 * j / points;
    s += std::exp(z * (std::cos(t) - 1.0L)) * std::cos(k * t);
  }
  return static_cast<double>(s / points);
}

}  // namespace

TEST_CASE("scaled Bessel at zero") {
  CHECK(scaled_bessel(0, 0.0) == 1.0);
  for (int k = 1; k < 10; ++k) CHECK(scaled_bessel(k, 0.0) == 0.0);
}

TEST_CASE("scaled Bessel matches the cosine integral") {
  CHECK(std::abs(scaled_bessel(3, 10.0) / cosine_integral(3, 10.0) - 1.0) <= 1e-12);
  // The trapezoid sum carries absolute error near long double epsilon, so it
  // is only a relative oracle where the value itself is not tiny.
  for (double z : {0.5, 2.0, 10.0, 80.0, 1000.0, 10000.0})
    for (int k : {0, 1, 4, 7, 12}) {
      const double ref = cosine_integral(k, z);
      if (ref < 1e-5) continue;
      INFO("order " << k << " z " << z);
      CHECK(std::abs(scaled_bessel(k, z) / ref - 1.0) <= 1e-12);
    }
}

TEST_CASE("scaled Bessel matches high-precision reference values") {
  double worst = 0.0;
  for (const Ref& r : kReference) {
    const double v = scaled_bessel(r.order, r.z);
    const double rel = std::abs(v / r.value - 1.0);
    worst = std::max(worst, rel);
    INFO("order " << r.order << " z " << r.z);
    CHECK(rel <= 1e-12);
  }
  MESSAGE("worst relative error " << worst);
}

TEST_CASE("scaled Bessel sequence is consistent with single orders and the recurrence") {
  for (double z : {1e-4, 0.3, 7.0, 29.0, 31.0, 400.0, 1e4}) {
    std::vector<double> seq(201);
    scaled_bessel_sequence(200, z, seq);
    for (int k = 0; k <= 200; k += 7) {
      if (seq[k] < 1e-290) continue;
      CHECK(std::abs(seq[k] / scaled_bessel(k, z) - 1.0) <= 1e-13);
    }
    for (int k = 1; k < 200; ++k) {
      if (seq[k + 1] < 1e-280 || seq[k] < 1e-280) continue;
      const double lhs = seq[k - 1] - seq[k + 1];
      const double rhs = 2.0 * k / z * seq[k];
      CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(std::abs(rhs), seq[k - 1]));
    }
    double norm = seq[0];
    for (int k = 1; k <= 200; ++k) norm += 2 * seq[k];
    if (z < 5000) CHECK(norm == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("scaled Bessel rejects negative arguments") {
  CHECK_THROWS_AS(scaled_bessel(-1, 1.0), InputError);
  CHECK_THROWS_AS(scaled_bessel(1, -1.0), InputError);
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  for (int n : {1, 2, 5, 15, 40}) {
    const auto rule = make_gauss_legendre(n);
    double wsum = 0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("adaptive quadrature") {
  const double bp[] = {0.0, 1.0, 10.0};
  auto r = integrate_adaptive([](double x) { return std::exp(-x); }, bp, 1e-13);
  CHECK(r.value == doctest::Approx(1.0 - std::exp(-10.0)).epsilon(1e-13));
  CHECK(r.abs_error <= 1e-13);
  const double bp2[] = {0.0, 1.0};
  auto s = integrate_adaptive([](double x) { return std::sqrt(x); }, bp2, 1e-10);
  CHECK(s.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-9)); }, bp2, 1e-14, 4),
                  NumericalError);
}
