#include <doctest.h>

#include <cmath>

#include "sandlab/errors.hpp"
#include "sandlab/green.hpp"
#include "sandlab/heights.hpp"
#include "sandlab/montecarlo.hpp"

using namespace sandlab;

namespace {

ChainConfig small_config(const ModelParams& p, std::int64_t samples, std::uint64_t seed) {
  ChainConfig cfg(p);
  cfg.seed = seed;
  cfg.samples = samples;
  cfg.check_every = 500;
  return cfg;
}

}  // namespace

TEST_CASE("replica streams are deterministic and have the requested length") {
  ModelParams p(2, 2, 1, 1);
  ChainConfig cfg = small_config(p, 5000, 17);
  cfg.record_timeseries = true;
  const ReplicaStream a = run_replica(cfg, 0), b = run_replica(cfg, 0), c = run_replica(cfg, 1);
  std::int64_t n = 0;
  for (const auto& bs : a.batches) n += bs.samples;
  CHECK(n == cfg.samples);
  CHECK(a.batches.size() == static_cast<std::size_t>(cfg.batches));
  CHECK(a.timeseries.size() == static_cast<std::size_t>(cfg.samples));
  REQUIRE(a.batches.size() == b.batches.size());
  for (std::size_t i = 0; i < a.batches.size(); ++i) {
    CHECK(a.batches[i].height_counts == b.batches[i].height_counts);
    CHECK(a.batches[i].pair_counts == b.batches[i].pair_counts);
    CHECK(a.batches[i].toppling_by_disp == b.batches[i].toppling_by_disp);
  }
  CHECK(a.seed != c.seed);
  CHECK(a.allowed_checks == cfg.samples / cfg.check_every);
  CHECK(a.allowed_failures == 0);
  CHECK(a.unstable_samples == 0);
}

TEST_CASE("estimators: normalisation, sum rules and exact comparisons") {
  ModelParams p(2, 4, 1, 2);
  ChainConfig cfg = small_config(p, 100000, 5);
  cfg.replicas = 2;
  const auto streams = run_replicas(cfg);
  const Estimates est = merge_estimates(streams);
  CHECK(est.samples == 200000);
  double total = 0;
  for (const auto& e : est.P_alpha) total += e.mean;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(est.mean_topplings.reliable());

  const ZReport top = compare_to_exact(est.mean_topplings, 0.5);
  CHECK(std::abs(top.z) <= 3.0);
  CHECK_FALSE(top.flagged);

  const Lattice lat(p);
  const auto column = green_finite_column(p);
  CHECK(std::abs(compare_to_exact(est.mean_waves, column[lat.index_of({0, 0})]).z) <= 3.0);

  const auto t = GreenTable::build_finite(p, p0_displacements(2));
  CHECK(std::abs(compare_to_exact(est.P_alpha[0], p0_determinantal(t)).z) <= 3.0);

  for (int y1 = -3; y1 <= 3; ++y1)
    for (int y2 = -3; y2 <= 3; ++y2) {
      if (y1 * y1 + y2 * y2 > 9) continue;
      const Coords y{y1, y2};
      INFO("y = (" << y1 << "," << y2 << ")");
      CHECK(std::abs(compare_to_exact(est.green_hat(y), column[lat.index_of(y)]).z) <= 3.0);
    }

  CHECK(est.adjacent_subn_pairs == 0);
  const auto pairs = est.pairs;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    int l1 = 0;
    for (int c : pairs[k]) l1 += std::abs(c);
    if (l1 == 1) CHECK(est.pair(k, 0, 0).mean == 0.0);
  }
  CHECK(est.allowed_failures == 0);
  CHECK(est.site_zero_max_rel_dev < 0.5);
}

TEST_CASE("merged means do not depend on how streams are partitioned") {
  ModelParams p(2, 2, 2, 1);
  ChainConfig cfg = small_config(p, 4000, 9);
  cfg.replicas = 3;
  auto streams = run_replicas(cfg);
  const Estimates e1 = merge_estimates(streams);
  std::swap(streams[0], streams[2]);
  const Estimates e2 = merge_estimates(streams);
  CHECK(e1.mean_topplings.mean == doctest::Approx(e2.mean_topplings.mean).epsilon(1e-14));
  for (std::size_t a = 0; a < e1.P_alpha.size(); ++a)
    CHECK(e1.P_alpha[a].mean == doctest::Approx(e2.P_alpha[a].mean).epsilon(1e-14));
  double pooled = 0;
  for (const auto& s : streams) pooled += merge_estimates({s}).mean_waves.mean;
  CHECK(e1.mean_waves.mean == doctest::Approx(pooled / 3).epsilon(1e-12));
}

TEST_CASE("estimator reliability requires 20 batches") {
  ModelParams p(2, 1, 1, 1);
  ChainConfig cfg = small_config(p, 1000, 2);
  cfg.batches = 10;
  const Estimates est = merge_estimates({run_replica(cfg, 0)});
  CHECK_FALSE(est.mean_topplings.reliable());
  CHECK_FALSE(compare_to_exact(est.mean_topplings, 1.0).reliable);
  CHECK(std::isfinite(est.mean_topplings.std_error));
}

TEST_CASE("chain configuration validation") {
  ModelParams p(2, 2, 1, 1);
  ChainConfig cfg(p);
  cfg.replicas = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = ChainConfig(p);
  cfg.samples = 5;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = ChainConfig(p);
  cfg.pair_displacements = {{1, 0, 0}};
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = ChainConfig(p);
  CHECK(cfg.effective_burn_in() >= 10 * p.sites());
  CHECK_THROWS_AS(merge_estimates({}), InputError);
}

TEST_CASE("mean topplings obey the sum rule across parameters") {
  for (auto p : {ModelParams(2, 2, 2, 1), ModelParams(3, 1, 1, 3), ModelParams(2, 3, 1, 1)}) {
    ChainConfig cfg = small_config(p, 40000, 3);
    const Estimates est = merge_estimates({run_replica(cfg, 0)});
    CHECK(std::abs(compare_to_exact(est.mean_topplings, 1.0 / p.m()).z) <= 3.0);
  }
}
