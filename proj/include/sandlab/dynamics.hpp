#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sandlab/lattice.hpp"
#include "sandlab/rng.hpp"

namespace sandlab {

// Integer grain counts H = n*h on the torus.
class GrainConfig {
 public:
  explicit GrainConfig(const ModelParams& p);
  GrainConfig(const ModelParams& p, std::vector<std::int32_t> heights);

  // All sites at threshold - 1.
  static GrainConfig max_stable(const ModelParams& p);
  static GrainConfig uniform_random(const ModelParams& p, Rng& rng);

  const ModelParams& params() const { return p_; }
  SiteIndex sites() const { return static_cast<SiteIndex>(H_.size()); }
  std::int32_t operator[](SiteIndex s) const { return H_[s]; }
  std::span<const std::int32_t> heights() const { return H_; }
  std::vector<std::int32_t>& mutable_heights() { return H_; }

  void set(SiteIndex s, std::int32_t v);
  std::int64_t total() const;
  bool stable() const;

  friend bool operator==(const GrainConfig& x, const GrainConfig& y) {
    return x.p_ == y.p_ && x.H_ == y.H_;
  }

 private:
  ModelParams p_;
  std::vector<std::int32_t> H_;
};

struct AvalancheRecord {
  SiteIndex seed = 0;
  // (site, toppling count), sorted by site, only sites that toppled.
  std::vector<std::pair<SiteIndex, std::int64_t>> topplings;
  std::int64_t waves = 0;
  std::int64_t dissipated = 0;
  std::int64_t rounds = 1;
  std::int64_t total_topplings = 0;
  // Filled only in wave mode: topplings per wave, seed toppling included.
  std::vector<std::int64_t> wave_sizes;

  std::int64_t topplings_at(SiteIndex s) const;
  std::vector<std::int64_t> dense_topplings(SiteIndex sites) const;
};

enum class StabilizeMode { rounds, waves };

// Reusable scratch space for avalanches on one lattice.
class Stabilizer {
 public:
  explicit Stabilizer(const ModelParams& p);

  const Lattice& lattice() const { return lat_; }

  // Adds one grain at x and stabilizes in parallel rounds (or wave by wave).
  AvalancheRecord deposit(GrainConfig& h, SiteIndex x, StabilizeMode mode = StabilizeMode::rounds);

 private:
  AvalancheRecord deposit_rounds(GrainConfig& h, SiteIndex x);
  AvalancheRecord deposit_waves(GrainConfig& h, SiteIndex x);
  void topple(std::vector<std::int32_t>& H, SiteIndex s);
  AvalancheRecord finish(SiteIndex x);

  Lattice lat_;
  int thr_;
  int n_;
  std::vector<std::int64_t> count_;
  std::vector<SiteIndex> touched_;
  std::vector<SiteIndex> frontier_, next_;
  std::vector<char> queued_;
};

std::pair<GrainConfig, AvalancheRecord> deposit_and_stabilize(const GrainConfig& h, SiteIndex x);

// Draws x uniformly, then deposits. The configuration is updated in place.
AvalancheRecord chain_step(GrainConfig& h, Rng& rng, Stabilizer& stab);

GrainConfig apply_operator_word(const GrainConfig& h, std::span<const SiteIndex> word);

// Smallest k <= cap with a(x)^k h == h.
std::optional<std::int64_t> operator_period(const GrainConfig& h, SiteIndex x, std::int64_t cap);

namespace serial {
// Site-by-site toppling reference. Without an order generator the most
// recently destabilized site topples first; with one, a uniformly random
// unstable site topples at each step.
std::pair<GrainConfig, AvalancheRecord> deposit_and_stabilize(const GrainConfig& h, SiteIndex x,
                                                              Rng* order = nullptr);
}  // namespace serial

// Binary snapshot: "SNDL", u32 version, i32 d, L, n, m, then i32 counts
// in flat-index order, all little-endian.
void write_snapshot(std::ostream& os, const GrainConfig& h);
GrainConfig read_snapshot(std::istream& is);

}  // namespace sandlab
