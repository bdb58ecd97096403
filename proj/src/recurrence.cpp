#include "sandlab/recurrence.hpp"

#include <omp.h>

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sandlab/errors.hpp"

namespace sandlab {

namespace {

std::vector<std::uint32_t> neighbor_masks(const Lattice& lat) {
  if (lat.sites() > kMaxFscSites)
    throw InputError("fsc_exhaustive: lattice has " + std::to_string(lat.sites()) +
                     " sites, subset search is limited to " + std::to_string(kMaxFscSites));
  std::vector<std::uint32_t> masks(lat.sites(), 0);
  for (SiteIndex s = 0; s < lat.sites(); ++s)
    for (SiteIndex t : lat.neighbors(s)) masks[s] |= 1u << t;
  return masks;
}

bool has_fsc(const std::vector<std::uint32_t>& masks, std::span<const std::int32_t> H, int n) {
  const int N = static_cast<int>(masks.size());
  const std::uint32_t full = (1u << N) - 1u;
  for (std::uint32_t F = 1; F <= full; ++F) {
    bool forbidden = true;
    for (std::uint32_t rest = F; rest; rest &= rest - 1) {
      int y = std::countr_zero(rest);
      if (H[y] >= n * std::popcount(masks[y] & F)) {
        forbidden = false;
        break;
      }
    }
    if (forbidden) return true;
  }
  return false;
}

std::int64_t state_count(const ModelParams& p, std::int64_t max_states) {
  double states = std::pow(static_cast<double>(p.threshold()), static_cast<double>(p.sites()));
  if (states > static_cast<double>(max_states))
    throw InputError("enumeration would visit " + std::to_string(states) +
                     " configurations, above the limit " + std::to_string(max_states));
  std::int64_t total = 1;
  for (std::int64_t i = 0; i < p.sites(); ++i) total *= p.threshold();
  return total;
}

// Mixed-radix odometer over stable configurations, site 0 fastest.
void decode(std::int64_t idx, int thr, std::vector<std::int32_t>& H) {
  for (auto& v : H) {
    v = static_cast<std::int32_t>(idx % thr);
    idx /= thr;
  }
}

void advance(int thr, std::vector<std::int32_t>& H) {
  for (auto& v : H) {
    if (++v < thr) return;
    v = 0;
  }
}

struct BurnScratch {
  std::vector<std::int32_t> unburnt_nbrs;
  std::vector<char> queued;
  std::vector<SiteIndex> queue;
};

bool is_allowed_scratch(const Lattice& lat, std::span<const std::int32_t> H, BurnScratch& w) {
  const SiteIndex N = lat.sites();
  const int deg = lat.degree();
  const int n = lat.params().n();
  w.unburnt_nbrs.assign(N, deg);
  w.queued.assign(N, 0);
  w.queue.clear();
  for (SiteIndex s = 0; s < N; ++s) {
    if (H[s] >= n * deg) {
      w.queued[s] = 1;
      w.queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < w.queue.size(); ++head) {
    SiteIndex s = w.queue[head];
    for (SiteIndex t : lat.neighbors(s)) {
      if (w.queued[t]) continue;
      if (H[t] >= n * --w.unburnt_nbrs[t]) {
        w.queued[t] = 1;
        w.queue.push_back(t);
      }
    }
  }
  return static_cast<SiteIndex>(w.queue.size()) == N;
}

}  // namespace

bool fsc_exhaustive(const GrainConfig& h) {
  Lattice lat(h.params());
  return has_fsc(neighbor_masks(lat), h.heights(), h.params().n());
}

bool is_allowed(const Lattice& lat, std::span<const std::int32_t> H) {
  BurnScratch w;
  return is_allowed_scratch(lat, H, w);
}

BurnResult burning_allowed(const GrainConfig& h) {
  const ModelParams& p = h.params();
  Lattice lat(p);
  const SiteIndex N = lat.sites();
  const int n = p.n();
  const int m = p.m();
  auto H = h.heights();

  std::vector<int> burn_time(N, -1);
  std::vector<int> unburnt_nbrs(N, lat.degree());
  BurnResult res;
  std::vector<SiteIndex> fresh;
  for (int t = 0;; ++t) {
    fresh.clear();
    for (SiteIndex y = 0; y < N; ++y)
      if (burn_time[y] < 0 && H[y] >= n * unburnt_nbrs[y]) fresh.push_back(y);
    if (fresh.empty()) break;
    for (SiteIndex y : fresh) {
      // Candidate edges to sites burnt at round t (the root when t == 0),
      // in direction order with copies 0..n-1, then the m root edges.
      std::int64_t s = H[y] - static_cast<std::int64_t>(n) * unburnt_nbrs[y];
      std::int64_t candidates = 0;
      TreeEdge edge{y, TreeEdge::kRootDirection, 0};
      bool chosen = false;
      if (t > 0) {
        for (int dir = 0; dir < lat.degree() && !chosen; ++dir) {
          if (burn_time[lat.neighbor(y, dir)] != t) continue;
          if (s < candidates + n) {
            edge = {y, dir, static_cast<int>(s - candidates)};
            chosen = true;
          }
          candidates += n;
        }
      } else {
        candidates = m;
        if (s < m) {
          edge = {y, TreeEdge::kRootDirection, static_cast<int>(s)};
          chosen = true;
        }
      }
      if (!chosen)
        throw std::logic_error("burning: tie index s exceeds the candidate edge count at site " +
                               std::to_string(y));
      res.burn_order.emplace_back(y, t + 1);
      res.tree_edges.push_back(edge);
    }
    for (SiteIndex y : fresh) burn_time[y] = t + 1;
    for (SiteIndex y : fresh)
      for (SiteIndex z : lat.neighbors(y)) --unburnt_nbrs[z];
  }
  for (SiteIndex y = 0; y < N; ++y)
    if (burn_time[y] < 0) res.unburnt.push_back(y);
  res.allowed = res.unburnt.empty();
  return res;
}

std::int64_t enumerate_allowed_count(const ModelParams& p, std::int64_t max_states) {
  const std::int64_t total = state_count(p, max_states);
  const int thr = p.threshold();
  Lattice lat(p);
  std::int64_t count = 0;
#pragma omp parallel reduction(+ : count)
  {
    const int nt = omp_get_num_threads();
    const int id = omp_get_thread_num();
    const std::int64_t begin = total * id / nt;
    const std::int64_t end = total * (id + 1) / nt;
    std::vector<std::int32_t> H(lat.sites());
    BurnScratch w;
    decode(begin, thr, H);
    for (std::int64_t i = begin; i < end; ++i) {
      if (is_allowed_scratch(lat, H, w)) ++count;
      advance(thr, H);
    }
  }
  return count;
}

FscSweepResult fsc_burning_sweep(const ModelParams& p, std::int64_t max_states) {
  const std::int64_t total = state_count(p, max_states);
  const int thr = p.threshold();
  Lattice lat(p);
  const auto masks = neighbor_masks(lat);
  std::int64_t allowed = 0, bad = 0;
#pragma omp parallel reduction(+ : allowed, bad)
  {
    const int nt = omp_get_num_threads();
    const int id = omp_get_thread_num();
    const std::int64_t begin = total * id / nt;
    const std::int64_t end = total * (id + 1) / nt;
    std::vector<std::int32_t> H(lat.sites());
    BurnScratch w;
    decode(begin, thr, H);
    for (std::int64_t i = begin; i < end; ++i) {
      bool a = is_allowed_scratch(lat, H, w);
      allowed += a;
      bad += (a == has_fsc(masks, H, p.n()));
      advance(thr, H);
    }
  }
  return {total, allowed, bad};
}

double recurrent_log_count(const ModelParams& p) {
  return static_cast<double>(p.sites()) * std::log(static_cast<double>(p.n())) + log_det_delta(p);
}

namespace serial {

std::int64_t enumerate_allowed_count(const ModelParams& p, std::int64_t max_states) {
  const std::int64_t total = state_count(p, max_states);
  Lattice lat(p);
  std::vector<std::int32_t> H(lat.sites(), 0);
  BurnScratch w;
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < total; ++i) {
    if (is_allowed_scratch(lat, H, w)) ++count;
    advance(p.threshold(), H);
  }
  return count;
}

FscSweepResult fsc_burning_sweep(const ModelParams& p, std::int64_t max_states) {
  const std::int64_t total = state_count(p, max_states);
  Lattice lat(p);
  const auto masks = neighbor_masks(lat);
  std::vector<std::int32_t> H(lat.sites(), 0);
  BurnScratch w;
  FscSweepResult r{total, 0, 0};
  for (std::int64_t i = 0; i < total; ++i) {
    bool a = is_allowed_scratch(lat, H, w);
    r.allowed += a;
    r.disagreements += (a == has_fsc(masks, H, p.n()));
    advance(p.threshold(), H);
  }
  return r;
}

}  // namespace serial

}  // namespace sandlab
