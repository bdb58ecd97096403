#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sandlab {

using Coords = std::vector<int>;
using SiteIndex = std::int32_t;

// Exact rational p/q with q > 0, kept in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational make_rational(std::int64_t num, std::int64_t den);

class ModelParams {
 public:
  ModelParams(int d, int L, int n, int m);

  int d() const { return d_; }
  int L() const { return L_; }
  int n() const { return n_; }
  int m() const { return m_; }
  int period() const { return 2 * L_ + 1; }
  std::int64_t sites() const { return sites_; }

  // Toppling threshold in grains, 2dn + m.
  int threshold() const { return 2 * d_ * n_ + m_; }
  Rational a_exact() const { return make_rational(m_, 2 * d_ * n_); }
  Rational hc_exact() const { return make_rational(threshold(), n_); }
  double a() const { return a_exact().value(); }
  double hc() const { return hc_exact().value(); }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  int d_, L_, n_, m_;
  std::int64_t sites_;
};

// Torus geometry. Flat index is row-major over (x_1+L, ..., x_d+L),
// x_1 slowest. Neighbor order is +e_1..+e_d, -e_1..-e_d.
class Lattice {
 public:
  explicit Lattice(const ModelParams& p);

  const ModelParams& params() const { return p_; }
  int dim() const { return p_.d(); }
  int degree() const { return 2 * p_.d(); }
  SiteIndex sites() const { return static_cast<SiteIndex>(p_.sites()); }

  SiteIndex index_of(const Coords& x) const;
  Coords coords_of(SiteIndex i) const;
  bool valid(const Coords& x) const;

  SiteIndex neighbor(SiteIndex i, int dir) const {
    return nbr_[static_cast<std::size_t>(i) * degree() + dir];
  }
  std::span<const SiteIndex> neighbors(SiteIndex i) const {
    return {nbr_.data() + static_cast<std::size_t>(i) * degree(),
            static_cast<std::size_t>(degree())};
  }
  std::vector<Coords> neighbors(const Coords& x) const;

  // Each component reduced into [-L, L].
  Coords min_image(const Coords& x) const;
  // Index of min_image(coords(to) - coords(from)).
  SiteIndex displacement_index(SiteIndex from, SiteIndex to) const;
  // Index of the site at min_image(x + dx).
  SiteIndex translate(SiteIndex i, const Coords& dx) const;

 private:
  ModelParams p_;
  std::vector<SiteIndex> nbr_;
  std::vector<std::int32_t> stride_;
  std::vector<std::int32_t> shifted_;  // sites x d table of x_i + L
};

// g = Delta_L f with diagonal h_c and -1 on nearest neighbors.
std::vector<double> delta_apply(std::span<const double> f, const Lattice& lat);

// 2d[(1+a) - (1/d) sum_i cos(2 pi k_i / (2L+1))].
double mode_eigenvalue(const Coords& k, const ModelParams& p);

// log det Delta_L, summed over all Fourier modes (OpenMP).
double log_det_delta(const ModelParams& p);

namespace serial {
double log_det_delta(const ModelParams& p);
}

// Every k in [-L, L]^d, visited in flat-index order.
std::vector<Coords> all_displacements(const ModelParams& p);

}  // namespace sandlab
