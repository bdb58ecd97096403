#include "sandlab/dynamics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <istream>
#include <ostream>

#include "sandlab/errors.hpp"

namespace sandlab {

GrainConfig::GrainConfig(const ModelParams& p) : p_(p), H_(p.sites(), 0) {}

GrainConfig::GrainConfig(const ModelParams& p, std::vector<std::int32_t> heights)
    : p_(p), H_(std::move(heights)) {
  if (static_cast<std::int64_t>(H_.size()) != p.sites())
    throw InputError("GrainConfig: height vector length does not match lattice sites");
  for (auto v : H_)
    if (v < 0) throw InputError("GrainConfig: negative grain count");
}

GrainConfig GrainConfig::max_stable(const ModelParams& p) {
  return GrainConfig(p, std::vector<std::int32_t>(p.sites(), p.threshold() - 1));
}

GrainConfig GrainConfig::uniform_random(const ModelParams& p, Rng& rng) {
  std::uniform_int_distribution<std::int32_t> dist(0, p.threshold() - 1);
  std::vector<std::int32_t> H(p.sites());
  for (auto& v : H) v = dist(rng);
  return GrainConfig(p, std::move(H));
}

void GrainConfig::set(SiteIndex s, std::int32_t v) {
  if (s < 0 || s >= sites()) throw InputError("GrainConfig::set: site out of range");
  if (v < 0) throw InputError("GrainConfig::set: negative grain count");
  H_[s] = v;
}

std::int64_t GrainConfig::total() const {
  std::int64_t t = 0;
  for (auto v : H_) t += v;
  return t;
}

bool GrainConfig::stable() const {
  const int thr = p_.threshold();
  return std::all_of(H_.begin(), H_.end(), [thr](std::int32_t v) { return v >= 0 && v < thr; });
}

std::int64_t AvalancheRecord::topplings_at(SiteIndex s) const {
  auto it = std::lower_bound(topplings.begin(), topplings.end(), s,
                             [](const auto& e, SiteIndex v) { return e.first < v; });
  return (it != topplings.end() && it->first == s) ? it->second : 0;
}

std::vector<std::int64_t> AvalancheRecord::dense_topplings(SiteIndex sites) const {
  std::vector<std::int64_t> out(sites, 0);
  for (const auto& [s, c] : topplings) out[s] = c;
  return out;
}

Stabilizer::Stabilizer(const ModelParams& p)
    : lat_(p), thr_(p.threshold()), n_(p.n()), count_(p.sites(), 0), queued_(p.sites(), 0) {}

void Stabilizer::topple(std::vector<std::int32_t>& H, SiteIndex s) {
  H[s] -= thr_;
  for (SiteIndex t : lat_.neighbors(s)) H[t] += n_;
  if (count_[s]++ == 0) touched_.push_back(s);
}

AvalancheRecord Stabilizer::finish(SiteIndex x) {
  AvalancheRecord rec;
  rec.seed = x;
  std::sort(touched_.begin(), touched_.end());
  rec.topplings.reserve(touched_.size());
  for (SiteIndex s : touched_) {
    rec.topplings.emplace_back(s, count_[s]);
    rec.total_topplings += count_[s];
    count_[s] = 0;
  }
  touched_.clear();
  rec.waves = rec.topplings_at(x);
  rec.dissipated = static_cast<std::int64_t>(lat_.params().m()) * rec.total_topplings;
  return rec;
}

AvalancheRecord Stabilizer::deposit(GrainConfig& h, SiteIndex x, StabilizeMode mode) {
  if (x < 0 || x >= lat_.sites()) throw InputError("deposit: site out of range");
  if (!(h.params() == lat_.params())) throw InputError("deposit: configuration parameters do not match");
  return mode == StabilizeMode::rounds ? deposit_rounds(h, x) : deposit_waves(h, x);
}

AvalancheRecord Stabilizer::deposit_rounds(GrainConfig& h, SiteIndex x) {
  auto& H = h.mutable_heights();
  H[x] += 1;
  std::int64_t rounds = 0;
  frontier_.clear();
  if (H[x] >= thr_) frontier_.push_back(x);
  while (!frontier_.empty()) {
    ++rounds;
    for (SiteIndex s : frontier_) topple(H, s);
    next_.clear();
    for (SiteIndex s : frontier_) {
      if (H[s] >= thr_ && !queued_[s]) {
        queued_[s] = 1;
        next_.push_back(s);
      }
      for (SiteIndex t : lat_.neighbors(s)) {
        if (H[t] >= thr_ && !queued_[t]) {
          queued_[t] = 1;
          next_.push_back(t);
        }
      }
    }
    for (SiteIndex s : next_) queued_[s] = 0;
    frontier_.swap(next_);
  }
  AvalancheRecord rec = finish(x);
  rec.rounds = rounds + 1;
  return rec;
}

AvalancheRecord Stabilizer::deposit_waves(GrainConfig& h, SiteIndex x) {
  auto& H = h.mutable_heights();
  H[x] += 1;
  std::vector<std::int64_t> sizes;
  while (H[x] >= thr_) {
    std::int64_t size = 1;
    topple(H, x);
    frontier_.clear();
    for (SiteIndex t : lat_.neighbors(x))
      if (t != x && H[t] >= thr_) frontier_.push_back(t);
    while (!frontier_.empty()) {
      SiteIndex s = frontier_.back();
      frontier_.pop_back();
      if (H[s] < thr_) continue;
      topple(H, s);
      ++size;
      if (H[s] >= thr_) frontier_.push_back(s);
      for (SiteIndex t : lat_.neighbors(s))
        if (t != x && H[t] >= thr_) frontier_.push_back(t);
    }
    sizes.push_back(size);
  }
  AvalancheRecord rec = finish(x);
  rec.rounds = 0;  // not tracked wave by wave
  rec.wave_sizes = std::move(sizes);
  return rec;
}

std::pair<GrainConfig, AvalancheRecord> deposit_and_stabilize(const GrainConfig& h, SiteIndex x) {
  Stabilizer stab(h.params());
  GrainConfig out = h;
  AvalancheRecord rec = stab.deposit(out, x);
  return {std::move(out), std::move(rec)};
}

AvalancheRecord chain_step(GrainConfig& h, Rng& rng, Stabilizer& stab) {
  std::uniform_int_distribution<SiteIndex> pick(0, h.sites() - 1);
  return stab.deposit(h, pick(rng));
}

GrainConfig apply_operator_word(const GrainConfig& h, std::span<const SiteIndex> word) {
  Stabilizer stab(h.params());
  GrainConfig out = h;
  for (SiteIndex x : word) stab.deposit(out, x);
  return out;
}

std::optional<std::int64_t> operator_period(const GrainConfig& h, SiteIndex x, std::int64_t cap) {
  if (!h.stable()) throw InputError("operator_period: configuration is not stable");
  Stabilizer stab(h.params());
  GrainConfig cur = h;
  for (std::int64_t k = 1; k <= cap; ++k) {
    stab.deposit(cur, x);
    if (cur == h) return k;
  }
  return std::nullopt;
}

namespace serial {

std::pair<GrainConfig, AvalancheRecord> deposit_and_stabilize(const GrainConfig& h, SiteIndex x,
                                                              Rng* order) {
  const ModelParams& p = h.params();
  Lattice lat(p);
  const int thr = p.threshold();
  GrainConfig out = h;
  auto& H = out.mutable_heights();
  std::vector<std::int64_t> count(p.sites(), 0);
  std::vector<SiteIndex> unstable;
  H[x] += 1;
  if (H[x] >= thr) unstable.push_back(x);
  while (!unstable.empty()) {
    std::size_t pos = unstable.size() - 1;
    if (order) pos = std::uniform_int_distribution<std::size_t>(0, unstable.size() - 1)(*order);
    SiteIndex s = unstable[pos];
    unstable[pos] = unstable.back();
    unstable.pop_back();
    if (H[s] < thr) continue;
    H[s] -= thr;
    ++count[s];
    if (H[s] >= thr) unstable.push_back(s);
    for (SiteIndex t : lat.neighbors(s)) {
      H[t] += p.n();
      if (H[t] >= thr) unstable.push_back(t);
    }
  }
  AvalancheRecord rec;
  rec.seed = x;
  for (SiteIndex s = 0; s < lat.sites(); ++s) {
    if (count[s] > 0) rec.topplings.emplace_back(s, count[s]);
    rec.total_topplings += count[s];
  }
  rec.waves = count[x];
  rec.dissipated = static_cast<std::int64_t>(p.m()) * rec.total_topplings;
  rec.rounds = 0;
  return {std::move(out), std::move(rec)};
}

}  // namespace serial

namespace {

constexpr std::array<char, 4> kMagic{'S', 'N', 'D', 'L'};
constexpr std::uint32_t kSnapshotVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw InputError("snapshot: unexpected end of data");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::int32_t get_i32(std::istream& is) { return std::bit_cast<std::int32_t>(get_u32(is)); }

}  // namespace

void write_snapshot(std::ostream& os, const GrainConfig& h) {
  const ModelParams& p = h.params();
  os.write(kMagic.data(), kMagic.size());
  put_u32(os, kSnapshotVersion);
  for (int v : {p.d(), p.L(), p.n(), p.m()}) put_u32(os, std::bit_cast<std::uint32_t>(v));
  for (auto v : h.heights()) put_u32(os, std::bit_cast<std::uint32_t>(v));
  if (!os) throw InputError("snapshot: write failed");
}

GrainConfig read_snapshot(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) throw InputError("snapshot: bad magic");
  if (get_u32(is) != kSnapshotVersion) throw InputError("snapshot: unsupported version");
  int d = get_i32(is), L = get_i32(is), n = get_i32(is), m = get_i32(is);
  ModelParams p(d, L, n, m);
  std::vector<std::int32_t> H(p.sites());
  for (auto& v : H) v = get_i32(is);
  GrainConfig h(p, std::move(H));
  if (!h.stable()) throw InputError("snapshot: configuration is not stable");
  return h;
}

}  // namespace sandlab
