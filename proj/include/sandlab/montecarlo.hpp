#pragma once

#include <cstdint>
#include <vector>

#include "sandlab/dynamics.hpp"
#include "sandlab/lattice.hpp"

namespace sandlab {

struct ChainConfig {
  ModelParams params;
  std::uint64_t seed = 1;
  std::int64_t burn_in = -1;  // negative: 100 * sites
  std::int64_t samples = 100000;
  std::int64_t thinning = 1;
  int replicas = 1;
  int batches = 32;
  std::vector<Coords> pair_displacements;  // empty: +-e_i and (k,...,k) for k <= min(6, L)
  std::int64_t check_every = 1000;         // burning check period, 0 disables
  bool record_timeseries = false;

  explicit ChainConfig(const ModelParams& p) : params(p) {}
  std::int64_t effective_burn_in() const;
  std::vector<Coords> effective_pairs() const;
  void validate() const;
};

// Per-batch sums; every per-sample quantity is a count, so merging is exact.
struct BatchSums {
  std::int64_t samples = 0;
  std::vector<std::int64_t> height_counts;  // threshold entries: sites at height alpha, summed over samples
  std::vector<std::int64_t> pair_counts;    // pairs x threshold x threshold
  std::int64_t topplings = 0;
  std::int64_t waves = 0;
  std::vector<std::int64_t> toppling_by_disp;  // indexed by flat index of the displacement from the seed
};

struct TimePoint {
  std::int64_t sample = 0;
  std::int64_t total_topplings = 0;
  std::int64_t waves = 0;
  std::int64_t rounds = 0;
  double zero_fraction = 0.0;
};

struct ReplicaStream {
  int replica_id = 0;
  std::uint64_t seed = 0;
  int d = 2, L = 1, n = 1, m = 1;
  std::vector<Coords> pairs;
  std::vector<BatchSums> batches;
  std::vector<std::int64_t> site_zero_counts;
  std::int64_t adjacent_subn_pairs = 0;
  std::int64_t allowed_checks = 0;
  std::int64_t allowed_failures = 0;
  std::int64_t unstable_samples = 0;
  std::vector<TimePoint> timeseries;
};

ReplicaStream run_replica(const ChainConfig& cfg, int replica_id);

// All replicas of cfg, run concurrently.
std::vector<ReplicaStream> run_replicas(const ChainConfig& cfg);

struct Estimator {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  int batches = 0;
  bool reliable() const { return batches >= 20; }
};

struct Estimates {
  explicit Estimates(const ModelParams& p) : params(p) {}

  ModelParams params;
  std::int64_t samples = 0;
  std::vector<Coords> pairs;
  std::vector<Estimator> P_alpha;
  std::vector<Estimator> P_pair;  // pairs x threshold x threshold, row-major
  Estimator mean_topplings;
  Estimator mean_waves;
  std::vector<Estimator> G_hat;  // by flat index of the displacement
  std::int64_t adjacent_subn_pairs = 0;
  std::int64_t allowed_checks = 0;
  std::int64_t allowed_failures = 0;
  std::int64_t unstable_samples = 0;
  double site_zero_max_rel_dev = 0.0;  // max_z |c_z - mean| / mean of per-site height-0 counts

  const Estimator& pair(std::size_t pair_index, int alpha, int beta) const;
  const Estimator& green_hat(const Coords& y) const;
};

Estimates merge_estimates(const std::vector<ReplicaStream>& streams);

struct ZReport {
  double mean = 0.0;
  double exact = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  bool flagged = false;
  bool reliable = false;
};

ZReport compare_to_exact(const Estimator& est, double exact_value);

}  // namespace sandlab
