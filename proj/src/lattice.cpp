#include "sandlab/lattice.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "sandlab/errors.hpp"

namespace sandlab {

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InputError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  return {num / g, den / g};
}

ModelParams::ModelParams(int d, int L, int n, int m) : d_(d), L_(L), n_(n), m_(m) {
  if (d < 2) throw InputError("dimension d must be >= 2, got " + std::to_string(d));
  if (L < 1) throw InputError("half-width L must be >= 1, got " + std::to_string(L));
  if (n < 1) throw InputError("granularity n must be >= 1, got " + std::to_string(n));
  if (m < 1) throw InputError("dissipation m must be >= 1, got " + std::to_string(m));
  double s = std::pow(2.0 * L + 1.0, d);
  if (s > 2.0e9) throw InputError("lattice too large: (2L+1)^d exceeds 2e9 sites");
  sites_ = 1;
  for (int i = 0; i < d; ++i) sites_ *= 2 * L + 1;
  if (static_cast<std::int64_t>(2) * d * n + m > std::numeric_limits<std::int32_t>::max() / 4)
    throw InputError("threshold 2dn+m too large");
}

Lattice::Lattice(const ModelParams& p) : p_(p) {
  const int d = p.d();
  const int P = p.period();
  const SiteIndex N = sites();
  stride_.assign(d, 1);
  for (int i = d - 2; i >= 0; --i) stride_[i] = stride_[i + 1] * P;

  shifted_.resize(static_cast<std::size_t>(N) * d);
  for (SiteIndex s = 0; s < N; ++s) {
    SiteIndex rem = s;
    for (int i = 0; i < d; ++i) {
      shifted_[static_cast<std::size_t>(s) * d + i] = rem / stride_[i];
      rem %= stride_[i];
    }
  }

  nbr_.resize(static_cast<std::size_t>(N) * 2 * d);
  for (SiteIndex s = 0; s < N; ++s) {
    for (int i = 0; i < d; ++i) {
      int c = shifted_[static_cast<std::size_t>(s) * d + i];
      int up = (c + 1) % P;
      int dn = (c + P - 1) % P;
      nbr_[static_cast<std::size_t>(s) * 2 * d + i] = s + (up - c) * stride_[i];
      nbr_[static_cast<std::size_t>(s) * 2 * d + d + i] = s + (dn - c) * stride_[i];
    }
  }
}

bool Lattice::valid(const Coords& x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int c : x)
    if (c < -p_.L() || c > p_.L()) return false;
  return true;
}

SiteIndex Lattice::index_of(const Coords& x) const {
  if (!valid(x)) throw InputError("coordinates outside [-L, L]^d");
  SiteIndex s = 0;
  for (int i = 0; i < dim(); ++i) s += (x[i] + p_.L()) * stride_[i];
  return s;
}

Coords Lattice::coords_of(SiteIndex s) const {
  if (s < 0 || s >= sites()) throw InputError("site index out of range");
  Coords x(dim());
  for (int i = 0; i < dim(); ++i) x[i] = shifted_[static_cast<std::size_t>(s) * dim() + i] - p_.L();
  return x;
}

std::vector<Coords> Lattice::neighbors(const Coords& x) const {
  SiteIndex s = index_of(x);
  std::vector<Coords> out;
  out.reserve(degree());
  for (SiteIndex t : neighbors(s)) out.push_back(coords_of(t));
  return out;
}

Coords Lattice::min_image(const Coords& x) const {
  if (static_cast<int>(x.size()) != dim()) throw InputError("displacement has wrong dimension");
  const int P = p_.period();
  const int L = p_.L();
  Coords y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    int r = ((x[i] + L) % P + P) % P;
    y[i] = r - L;
  }
  return y;
}

SiteIndex Lattice::displacement_index(SiteIndex from, SiteIndex to) const {
  const int d = dim();
  const int P = p_.period();
  const int L = p_.L();
  SiteIndex s = 0;
  for (int i = 0; i < d; ++i) {
    int diff = shifted_[static_cast<std::size_t>(to) * d + i] -
               shifted_[static_cast<std::size_t>(from) * d + i];
    // min-image value plus L, in [0, P)
    int r = ((diff + L) % P + P) % P;
    s += r * stride_[i];
  }
  return s;
}

SiteIndex Lattice::translate(SiteIndex from, const Coords& dx) const {
  const int d = dim();
  const int P = p_.period();
  SiteIndex s = 0;
  for (int i = 0; i < d; ++i) {
    int c = shifted_[static_cast<std::size_t>(from) * d + i] + dx[i];
    c = (c % P + P) % P;
    s += c * stride_[i];
  }
  return s;
}

std::vector<double> delta_apply(std::span<const double> f, const Lattice& lat) {
  if (static_cast<std::int64_t>(f.size()) != lat.sites())
    throw InputError("delta_apply: vector length does not match lattice sites");
  const double hc = lat.params().hc();
  std::vector<double> g(f.size());
  const SiteIndex N = lat.sites();
#pragma omp parallel for schedule(static) if (N > 4096)
  for (SiteIndex s = 0; s < N; ++s) {
    double acc = hc * f[s];
    for (SiteIndex t : lat.neighbors(s)) acc -= f[t];
    g[s] = acc;
  }
  return g;
}

double mode_eigenvalue(const Coords& k, const ModelParams& p) {
  const int d = p.d();
  if (static_cast<int>(k.size()) != d) throw InputError("mode vector has wrong dimension");
  double c = 0.0;
  for (int ki : k) c += std::cos(2.0 * std::numbers::pi * ki / p.period());
  return 2.0 * d * ((1.0 + p.a()) - c / d);
}

namespace {

std::vector<double> cos_table(const ModelParams& p) {
  std::vector<double> t(p.period());
  for (int j = 0; j < p.period(); ++j) t[j] = std::cos(2.0 * std::numbers::pi * (j - p.L()) / p.period());
  return t;
}

double mode_log(std::int64_t idx, const ModelParams& p, const std::vector<double>& ct) {
  const int P = p.period();
  double c = 0.0;
  for (int i = 0; i < p.d(); ++i) {
    c += ct[idx % P];
    idx /= P;
  }
  return std::log(2.0 * p.d() * (1.0 + p.a()) - 2.0 * c);
}

}  // namespace

double log_det_delta(const ModelParams& p) {
  const auto ct = cos_table(p);
  const std::int64_t N = p.sites();
  double sum = 0.0;
#pragma omp parallel for reduction(+ : sum) schedule(static)
  for (std::int64_t k = 0; k < N; ++k) sum += mode_log(k, p, ct);
  return sum;
}

namespace serial {
double log_det_delta(const ModelParams& p) {
  const auto ct = cos_table(p);
  double sum = 0.0;
  for (std::int64_t k = 0; k < p.sites(); ++k) sum += mode_log(k, p, ct);
  return sum;
}
}  // namespace serial

std::vector<Coords> all_displacements(const ModelParams& p) {
  Lattice lat(p);
  std::vector<Coords> out;
  out.reserve(lat.sites());
  for (SiteIndex s = 0; s < lat.sites(); ++s) out.push_back(lat.coords_of(s));
  return out;
}

}  // namespace sandlab
