#include "sandlab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sandlab/errors.hpp"
#include "sandlab/recurrence.hpp"

namespace sandlab {

std::int64_t ChainConfig::effective_burn_in() const { return burn_in < 0 ? 100 * params.sites() : burn_in; }

std::vector<Coords> ChainConfig::effective_pairs() const {
  if (!pair_displacements.empty()) return pair_displacements;
  const int d = params.d();
  std::vector<Coords> out;
  for (int sign : {1, -1})
    for (int i = 0; i < d; ++i) {
      Coords e(d, 0);
      e[i] = sign;
      out.push_back(e);
    }
  for (int k = 1; k <= std::min(6, params.L()); ++k) out.push_back(Coords(d, k));
  return out;
}

void ChainConfig::validate() const {
  if (samples < 1) throw InputError("samples must be >= 1");
  if (thinning < 1) throw InputError("thinning must be >= 1");
  if (replicas < 1) throw InputError("replicas must be >= 1");
  if (batches < 1) throw InputError("batches must be >= 1");
  if (samples < batches) throw InputError("samples must be >= batches");
  if (check_every < 0) throw InputError("check_every must be >= 0");
  Lattice lat(params);
  for (const auto& x : effective_pairs())
    if (static_cast<int>(x.size()) != params.d()) throw InputError("pair displacement has wrong dimension");
  const double pair_cells = static_cast<double>(effective_pairs().size()) * params.threshold() * params.threshold();
  if (pair_cells * batches > 5e8) throw InputError("pair table too large; reduce displacements or batches");
}

ReplicaStream run_replica(const ChainConfig& cfg, int replica_id) {
  cfg.validate();
  const ModelParams& p = cfg.params;
  const int thr = p.threshold();
  const int n = p.n();
  Stabilizer stab(p);
  const Lattice& lat = stab.lattice();
  const SiteIndex N = lat.sites();

  ReplicaStream out;
  out.replica_id = replica_id;
  out.seed = split_seed(cfg.seed, static_cast<std::uint64_t>(replica_id));
  out.d = p.d();
  out.L = p.L();
  out.n = p.n();
  out.m = p.m();
  out.pairs = cfg.effective_pairs();
  const std::size_t P = out.pairs.size();

  // partner[x][z] = site z + pairs[x]
  std::vector<std::vector<SiteIndex>> partner(P, std::vector<SiteIndex>(N));
  for (std::size_t x = 0; x < P; ++x)
    for (SiteIndex z = 0; z < N; ++z) partner[x][z] = lat.translate(z, out.pairs[x]);

  out.batches.resize(cfg.batches);
  for (auto& b : out.batches) {
    b.height_counts.assign(thr, 0);
    b.pair_counts.assign(P * thr * thr, 0);
    b.toppling_by_disp.assign(N, 0);
  }
  out.site_zero_counts.assign(N, 0);

  Rng rng(out.seed);
  GrainConfig h = GrainConfig::max_stable(p);
  for (std::int64_t t = 0; t < cfg.effective_burn_in(); ++t) chain_step(h, rng, stab);

  std::vector<std::int64_t> hist(thr);
  for (std::int64_t i = 0; i < cfg.samples; ++i) {
    AvalancheRecord rec;
    for (std::int64_t t = 0; t < cfg.thinning; ++t) rec = chain_step(h, rng, stab);
    auto H = h.heights();
    BatchSums& b = out.batches[static_cast<std::size_t>(i * cfg.batches / cfg.samples)];
    ++b.samples;

    std::fill(hist.begin(), hist.end(), 0);
    bool stable = true;
    for (SiteIndex z = 0; z < N; ++z) {
      if (H[z] < 0 || H[z] >= thr) {
        stable = false;
        continue;
      }
      ++hist[H[z]];
      if (H[z] == 0) ++out.site_zero_counts[z];
    }
    if (!stable) ++out.unstable_samples;
    for (int al = 0; al < thr; ++al) b.height_counts[al] += hist[al];

    for (std::size_t x = 0; x < P; ++x) {
      std::int64_t* cell = b.pair_counts.data() + x * thr * thr;
      const SiteIndex* pz = partner[x].data();
      for (SiteIndex z = 0; z < N; ++z) ++cell[H[z] * thr + H[pz[z]]];
    }
    for (SiteIndex z = 0; z < N; ++z) {
      if (H[z] >= n) continue;
      for (int dir = 0; dir < p.d(); ++dir)
        if (H[lat.neighbor(z, dir)] < n) ++out.adjacent_subn_pairs;
    }

    b.topplings += rec.total_topplings;
    b.waves += rec.waves;
    for (const auto& [site, count] : rec.topplings) b.toppling_by_disp[lat.displacement_index(rec.seed, site)] += count;

    if (cfg.check_every > 0 && i % cfg.check_every == 0) {
      ++out.allowed_checks;
      if (!is_allowed(lat, H)) ++out.allowed_failures;
    }
    if (cfg.record_timeseries)
      out.timeseries.push_back({i, rec.total_topplings, rec.waves, rec.rounds,
                                static_cast<double>(hist[0]) / N});
  }
  return out;
}

std::vector<ReplicaStream> run_replicas(const ChainConfig& cfg) {
  cfg.validate();
  std::vector<ReplicaStream> streams(cfg.replicas);
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < cfg.replicas; ++r) streams[r] = run_replica(cfg, r);
  return streams;
}

namespace {

// Batch means: pooled mean is total / samples; the error comes from the
// spread of the per-batch means.
template <typename SumOf>
Estimator batch_estimate(const std::vector<const BatchSums*>& batches, double scale, SumOf sum_of) {
  Estimator e;
  double total = 0.0;
  std::vector<double> means;
  for (const BatchSums* b : batches) {
    if (b->samples == 0) continue;
    double s = static_cast<double>(sum_of(*b)) * scale;
    total += s;
    e.n_samples += b->samples;
    means.push_back(s / b->samples);
  }
  e.batches = static_cast<int>(means.size());
  e.mean = e.n_samples > 0 ? total / e.n_samples : std::numeric_limits<double>::quiet_NaN();
  if (means.size() >= 2) {
    double mu = 0.0;
    for (double m : means) mu += m;
    mu /= means.size();
    double var = 0.0;
    for (double m : means) var += (m - mu) * (m - mu);
    var /= (means.size() - 1);
    e.std_error = std::sqrt(var / means.size());
  } else {
    e.std_error = std::numeric_limits<double>::quiet_NaN();
  }
  return e;
}

}  // namespace

const Estimator& Estimates::pair(std::size_t pair_index, int alpha, int beta) const {
  const int thr = params.threshold();
  if (pair_index >= pairs.size() || alpha < 0 || alpha >= thr || beta < 0 || beta >= thr)
    throw InputError("pair estimator index out of range");
  return P_pair[(pair_index * thr + alpha) * thr + beta];
}

const Estimator& Estimates::green_hat(const Coords& y) const {
  Lattice lat(params);
  return G_hat[lat.index_of(lat.min_image(y))];
}

Estimates merge_estimates(const std::vector<ReplicaStream>& streams) {
  if (streams.empty()) throw InputError("merge_estimates: no streams");
  const auto& first = streams.front();
  if (first.batches.empty()) throw InputError("merge_estimates: stream has no batches");
  const int thr = static_cast<int>(first.batches.front().height_counts.size());
  const std::size_t N = first.site_zero_counts.size();
  const std::size_t P = first.pairs.size();

  std::vector<const BatchSums*> all;
  std::vector<std::int64_t> zero_counts(N, 0);
  Estimates est(ModelParams(first.d, first.L, first.n, first.m));
  for (const auto& s : streams) {
    if (s.pairs != first.pairs || s.site_zero_counts.size() != N || s.d != first.d || s.L != first.L ||
        s.n != first.n || s.m != first.m)
      throw InputError("merge_estimates: streams come from different configurations");
    for (const auto& b : s.batches) all.push_back(&b);
    for (std::size_t z = 0; z < N; ++z) zero_counts[z] += s.site_zero_counts[z];
    est.adjacent_subn_pairs += s.adjacent_subn_pairs;
    est.allowed_checks += s.allowed_checks;
    est.allowed_failures += s.allowed_failures;
    est.unstable_samples += s.unstable_samples;
  }
  est.pairs = first.pairs;
  const double inv_sites = 1.0 / static_cast<double>(N);

  est.P_alpha.resize(thr);
  for (int al = 0; al < thr; ++al)
    est.P_alpha[al] = batch_estimate(all, inv_sites, [al](const BatchSums& b) { return b.height_counts[al]; });
  est.P_pair.resize(P * thr * thr);
  for (std::size_t c = 0; c < est.P_pair.size(); ++c)
    est.P_pair[c] = batch_estimate(all, inv_sites, [c](const BatchSums& b) { return b.pair_counts[c]; });
  est.mean_topplings = batch_estimate(all, 1.0, [](const BatchSums& b) { return b.topplings; });
  est.mean_waves = batch_estimate(all, 1.0, [](const BatchSums& b) { return b.waves; });
  est.G_hat.resize(N);
  for (std::size_t y = 0; y < N; ++y)
    est.G_hat[y] = batch_estimate(all, 1.0, [y](const BatchSums& b) { return b.toppling_by_disp[y]; });
  est.samples = est.mean_topplings.n_samples;

  double mean0 = 0.0;
  for (auto c : zero_counts) mean0 += static_cast<double>(c);
  mean0 /= static_cast<double>(N);
  if (mean0 > 0.0)
    for (auto c : zero_counts)
      est.site_zero_max_rel_dev = std::max(est.site_zero_max_rel_dev, std::abs(c - mean0) / mean0);
  return est;
}

ZReport compare_to_exact(const Estimator& est, double exact_value) {
  ZReport r;
  r.mean = est.mean;
  r.exact = exact_value;
  r.std_error = est.std_error;
  r.reliable = est.reliable() && std::isfinite(est.std_error);
  const double diff = est.mean - exact_value;
  if (est.std_error > 0.0) r.z = diff / est.std_error;
  else r.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  r.flagged = !(std::abs(r.z) <= 3.0);
  return r;
}

}  // namespace sandlab
