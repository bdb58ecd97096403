#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sandlab/errors.hpp"
#include "sandlab/green.hpp"
#include "sandlab/heights.hpp"

using namespace sandlab;

TEST_CASE("finite propagator equals the dense inverse and sums to 1/m") {
  for (auto [n, m] : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 3}}) {
    ModelParams p(2, 3, n, m);
    const Lattice lat(p);
    const Eigen::MatrixXd inv = testing::dense_delta(p).inverse() / n;
    const SiteIndex o = lat.index_of({0, 0});
    const auto col = green_finite_column(p);
    const auto ser = serial::green_finite_column(p);
    double sum = 0.0;
    for (SiteIndex i = 0; i < lat.sites(); ++i) {
      const Coords x = lat.coords_of(i);
      const double g = green_finite(p, x);
      CHECK(std::abs(g - inv(o, i)) <= 1e-10);
      CHECK(std::abs(col[i] - g) <= 1e-13);
      CHECK(ser[i] == col[i]);
      Coords mx = x;
      for (int& c : mx) c = -c;
      CHECK(green_finite(p, mx) == g);
      sum += g;
    }
    CHECK(std::abs(sum - 1.0 / m) <= 1e-12);
  }
}

TEST_CASE("n Delta G is the unit vector") {
  for (int L : {2, 5, 8}) {
    ModelParams p(2, L, 2, 1);
    const Lattice lat(p);
    auto col = green_finite_column(p);
    for (double& v : col) v *= p.n();
    const auto e = delta_apply(col, lat);
    const SiteIndex o = lat.index_of({0, 0});
    for (SiteIndex i = 0; i < lat.sites(); ++i) CHECK(std::abs(e[i] - (i == o ? 1.0 : 0.0)) <= 1e-9);
  }
  ModelParams p3(3, 3, 1, 1);
  const Lattice lat3(p3);
  const auto e = delta_apply(green_finite_column(p3), lat3);
  for (SiteIndex i = 0; i < lat3.sites(); ++i)
    CHECK(std::abs(e[i] - (i == lat3.index_of({0, 0, 0}) ? 1.0 : 0.0)) <= 1e-9);
}

TEST_CASE("infinite volume limit of the finite propagator") {
  for (double a : {0.1, 0.5}) {
    // a = m / (2 d n) with d = 2: a = 0.5 is n = 1, m = 2; a = 0.1 is n = 5, m = 2.
    const int n = a == 0.5 ? 1 : 5, m = 2;
    ModelParams p(2, 64, n, m);
    const Lattice lat(p);
    const auto col = green_finite_column(p);
    for (int x1 = -5; x1 <= 5; ++x1)
      for (int x2 = -5; x2 <= 5; ++x2) {
        if (x1 * x1 + x2 * x2 > 25) continue;
        const GreenValue gi = green_infinite(2, a, n, {x1, x2});
        CHECK(std::abs(gi.value - col[lat.index_of({x1, x2})]) <= 1e-6);
        CHECK(gi.abs_error <= 1e-10);
      }
  }
}

TEST_CASE("finite-size error decreases with L") {
  for (auto [n, m] : {std::pair{1, 2}, {5, 2}}) {
    const double a = double(m) / (4 * n);
    const double ginf = green_infinite(2, a, n, {0, 0}, 1e-12).value;
    double prev = 1e300;
    for (int L : {8, 16, 32, 64}) {
      const double err = std::abs(green_finite(ModelParams(2, L, n, m), {0, 0}) - ginf);
      if (prev > 1e-12)
        CHECK(err < prev);
      else
        CHECK(err <= 1e-12);
      prev = err;
    }
  }
}

TEST_CASE("isotropy of the infinite propagator") {
  const double tol = 1e-11;
  for (int d : {2, 3}) {
    Coords x(d, 0);
    x[0] = 3;
    x[1] = -1;
    const double ref = green_infinite(d, 0.2, 1, x, tol).value;
    Coords y = x;
    std::reverse(y.begin(), y.end());
    CHECK(std::abs(green_infinite(d, 0.2, 1, y, tol).value - ref) <= 10 * tol);
    for (int& c : y) c = -c;
    CHECK(std::abs(green_infinite(d, 0.2, 1, y, tol).value - ref) <= 10 * tol);
  }
}

TEST_CASE("lattice identities among g0..g3") {
  const double tol = 1e-12;
  for (int d : {2, 3})
    for (double a : {0.05, 0.1, 0.25, 0.5}) {
      const GValues g = g_values_infinite(d, a, 1, tol);
      CHECK(std::abs(g.g1 - ((1 + a) * g.g0 - 1.0 / (2 * d))) <= 1e-8);
      CHECK(std::abs(g.g2 - ((2 * d * (1 + a) * (1 + a) - 1) * g.g0 - 2 * (d - 1) * g.g3 - (1 + a))) <= 1e-8);
    }
}

TEST_CASE("tensor quadrature agrees with the Bessel route") {
  for (double a : {0.1, 0.5})
    for (Coords x : {Coords{0, 0}, Coords{1, 0}, Coords{2, 1}, Coords{4, 3}}) {
      const GreenValue b = green_infinite(2, a, 1, x, 1e-12);
      const GreenValue t = green_tensor_quadrature(2, a, 1, x);
      CHECK(std::abs(b.value - t.value) <= 1e-8);
    }
  for (Coords x : {Coords{0, 0, 0}, Coords{1, 1, 0}}) {
    const GreenValue b = green_infinite(3, 0.5, 1, x, 1e-12);
    const GreenValue t = green_tensor_quadrature(3, 0.5, 1, x);
    CHECK(std::abs(b.value - t.value) <= 1e-7);
  }
  CHECK_THROWS_AS(green_tensor_quadrature(4, 0.5, 1, {0, 0, 0, 0}), InputError);
}

TEST_CASE("green table canonicalisation and lookups") {
  const std::vector<Coords> xs{{0, 0}, {1, 0}, {2, -1}};
  auto t = GreenTable::build_infinite(2, 0.3, 1, xs, 1e-11);
  CHECK(t.value({0, -1}) == t.value({1, 0}));
  CHECK(t.value({-1, 2}) == t.value({2, -1}));
  CHECK_THROWS_AS(t.value({3, 0}), InputError);
  ModelParams p(2, 3, 1, 1);
  auto f = GreenTable::build_finite(p, {{3, 0}});
  CHECK(f.value({-3, 0}) == doctest::Approx(green_finite(p, {3, 0})).epsilon(1e-15));
  CHECK(f.finite_params().has_value());
  CHECK_THROWS_AS(green_infinite(2, 0.0, 1, {0, 0}), InputError);
  CHECK_THROWS_AS(green_infinite(2, 0.1, 1, {0, 0}, 1e-14), InputError);
}

TEST_CASE("asymptotic parameters") {
  const auto ap = asymptotic_params(2, 0.25);
  CHECK(ap.xi == doctest::Approx(1.0 / (std::sqrt(2.0) * std::log(2.0))).epsilon(1e-14));
  CHECK(ap.xi == doctest::Approx(1.020139).epsilon(1e-6));
  CHECK(ap.lambda == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(std::abs(asymptotic_params(2, 1e-4).xi / 50.0 - 1.0) <= 0.01);
  for (int d : {2, 3, 5})
    for (double a : {1e-5, 1e-3, 0.1, 0.5, 2.0}) {
      const auto q = asymptotic_params(d, a);
      const double s = std::sqrt(a * (a + 2));
      CHECK(std::abs(q.lambda - std::asinh(s)) <= 1e-14 * q.lambda);
      CHECK(std::abs(q.lambda - std::log1p(a + s)) <= 1e-14 * q.lambda);
      CHECK(std::abs(q.lambda - std::sqrt(double(d)) / q.xi / d) <= 1e-14 * q.lambda);
      const double c1 = 1.0 / (4 * std::numbers::pi * (a + 1)) *
                        std::pow(std::sqrt(a * (a + 2) * d) / (2 * std::numbers::pi * (a + 1)), (d - 3) / 2.0);
      CHECK(q.c1 == doctest::Approx(c1).epsilon(1e-14));
    }
}

TEST_CASE("diagonal propagator approaches the asymptotic form") {
  for (int d : {2, 3}) {
    const double a = 0.5;
    const auto ap = asymptotic_params(d, a);
    double prev_dev = 1e300;
    for (int k = 4; k <= 12; ++k) {
      const double r = k * std::sqrt(double(d));
      const double g = green_infinite(d, a, 1, diagonal_point(d, k), 1e-12).value;
      const double dev = std::abs(g / gbar(r, ap, 1) - 1.0);
      CHECK(dev < prev_dev);
      prev_dev = dev;
      if (k == 4) CHECK(dev <= 0.25);
    }
    CHECK(prev_dev <= 0.05);
  }
  const auto ap = asymptotic_params(3, 0.1);
  const double r1 = 3.0, r2 = 6.0;
  CHECK(std::log(gbar(r2, ap, 2) / gbar(r1, ap, 2)) ==
        doctest::Approx(-(r2 - r1) / ap.xi - 1.0 * std::log(r2 / r1)).epsilon(1e-13));
}

TEST_CASE("saddle point") {
  for (int d : {2, 3})
    for (double a : {0.01, 0.3}) {
      for (int k : {1, 3, 10}) {
        const Coords x = diagonal_point(d, k);
        const double s = saddle_point(x, d, a);
        CHECK(std::abs(saddle_residual(x, d, a, s)) <= 1e-10);
        Coords x2 = x;
        for (int& c : x2) c *= 2;
        CHECK(saddle_point(x2, d, a) == 2 * s);
      }
      const Coords off{5, 2, 1};
      if (d == 3) CHECK(std::abs(saddle_residual(off, d, a, saddle_point(off, d, a))) <= 1e-10);
    }
  const double a = 0.2;
  for (int d : {2, 3}) {
    const int k = static_cast<int>(std::lround(50 / std::sqrt(double(d))));
    const double r = k * std::sqrt(double(d));
    const double s = saddle_point(diagonal_point(d, k), d, a);
    CHECK(std::abs(s / (r * std::sqrt(d / (a * (a + 2)))) - 1.0) <= 0.02);
  }
  CHECK_THROWS_AS(saddle_point({0, 0}, 2, 0.1), InputError);
}
