#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sandlab/dynamics.hpp"
#include "sandlab/lattice.hpp"

namespace sandlab {

// Edge e(y) of the multigraph with root: joins `site` to its neighbor in
// `direction` (0..2d-1), or to the root when direction == kRootDirection.
// `copy` indexes the parallel edges (n per neighbor pair, m per root link).
struct TreeEdge {
  static constexpr int kRootDirection = -1;
  SiteIndex site = 0;
  int direction = kRootDirection;
  int copy = 0;
  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

struct BurnResult {
  bool allowed = false;
  std::vector<std::pair<SiteIndex, int>> burn_order;  // (site, burn time), by time then site
  std::vector<TreeEdge> tree_edges;                    // one per burnt site, same order
  std::vector<SiteIndex> unburnt;
};

inline constexpr int kMaxFscSites = 16;
inline constexpr std::int64_t kMaxEnumerationStates = 20'000'000;

// True iff some nonempty F has H(y) < n * #(F-neighbors of y) for all y in F.
bool fsc_exhaustive(const GrainConfig& h);

BurnResult burning_allowed(const GrainConfig& h);

// Greedy burning fixed point without building the tree.
bool is_allowed(const Lattice& lat, std::span<const std::int32_t> H);

std::int64_t enumerate_allowed_count(const ModelParams& p,
                                     std::int64_t max_states = kMaxEnumerationStates);

struct FscSweepResult {
  std::int64_t total = 0;
  std::int64_t allowed = 0;
  std::int64_t disagreements = 0;
};

// Compares is_allowed against !fsc_exhaustive over every stable configuration.
FscSweepResult fsc_burning_sweep(const ModelParams& p,
                                 std::int64_t max_states = kMaxEnumerationStates);

// sites * log n + log det Delta_L.
double recurrent_log_count(const ModelParams& p);

namespace serial {
std::int64_t enumerate_allowed_count(const ModelParams& p,
                                     std::int64_t max_states = kMaxEnumerationStates);
FscSweepResult fsc_burning_sweep(const ModelParams& p,
                                 std::int64_t max_states = kMaxEnumerationStates);
}  // namespace serial

}  // namespace sandlab
