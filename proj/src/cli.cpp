#include "sandlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <locale>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sandlab/errors.hpp"
#include "sandlab/green.hpp"
#include "sandlab/heights.hpp"
#include "sandlab/lattice.hpp"
#include "sandlab/montecarlo.hpp"
#include "sandlab/parallel.hpp"
#include "sandlab/recurrence.hpp"
#include "sandlab/scaling.hpp"

namespace sandlab {

namespace {

using json = nlohmann::ordered_json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

class CsvWriter {
 public:
  CsvWriter() {
    os_.imbue(std::locale::classic());
    os_ << std::setprecision(17);
  }
  template <typename... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cells, first = false), ...);
    os_ << '\n';
  }
  std::ostringstream& stream() { return os_; }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

struct Envelope {
  std::string command;
  std::string started;

  json open(const json& params, std::optional<std::uint64_t> seed) const {
    json j;
    j["schema"] = 1;
    j["version"] = SANDLAB_VERSION;
    j["command"] = command;
    j["params"] = params;
    if (seed)
      j["seed"] = *seed;
    else
      j["seed"] = nullptr;
    j["timestamps"] = {{"started", started}, {"finished", ""}};
    return j;
  }
};

void finish(json& j, const std::string& path) {
  j["timestamps"]["finished"] = utc_now();
  write_text(path, j.dump(2) + "\n");
}

json coords_json(const Coords& x) { return json(x); }

json estimator_json(const Estimator& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"n_samples", e.n_samples}, {"batches", e.batches}};
}

json zreport_json(const ZReport& z) {
  return {{"mean", z.mean},   {"std_error", z.std_error}, {"exact", z.exact},
          {"z", z.z},         {"flagged", z.flagged},     {"reliable", z.reliable}};
}

json model_json(const ModelParams& p) {
  return {{"d", p.d()},
          {"L", p.L()},
          {"n", p.n()},
          {"m", p.m()},
          {"a", p.a()},
          {"a_rational", std::to_string(p.a_exact().num) + "/" + std::to_string(p.a_exact().den)},
          {"threshold", p.threshold()},
          {"sites", p.sites()}};
}

// Sites with max_i |x_i| <= radius.
std::vector<Coords> box(int d, int radius) {
  std::vector<Coords> out;
  Coords x(d, -radius);
  while (true) {
    out.push_back(x);
    int i = d - 1;
    while (i >= 0 && x[i] == radius) x[i--] = -radius;
    if (i < 0) break;
    ++x[i];
  }
  return out;
}

struct ModelOpts {
  int d = 2;
  int L = 4;
  int n = 1;
  int m = 1;
};

void add_model_opts(CLI::App* app, ModelOpts& o, bool with_L = true) {
  app->add_option("--dim,-d", o.d, "Lattice dimension")->capture_default_str();
  if (with_L) app->add_option("--L", o.L, "Half-width; the torus has 2L+1 sites per side")->capture_default_str();
  app->add_option("--n", o.n, "Grains per unit height")->capture_default_str();
  app->add_option("--m", o.m, "Grains dissipated per toppling")->capture_default_str();
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  ModelOpts model{2, 8, 1, 2};
  std::uint64_t seed = 1;
  std::int64_t samples = 100000;
  std::int64_t burn_in = -1;
  std::int64_t thinning = 1;
  int replicas = 1;
  int batches = 32;
  std::int64_t check_every = 1000;
  std::string output;
  std::string timeseries;
};

int run_simulate(const SimulateOpts& o, const Envelope& env) {
  ModelParams p(o.model.d, o.model.L, o.model.n, o.model.m);
  ChainConfig cfg(p);
  cfg.seed = o.seed;
  cfg.samples = o.samples;
  cfg.burn_in = o.burn_in;
  cfg.thinning = o.thinning;
  cfg.replicas = o.replicas;
  cfg.batches = o.batches;
  cfg.check_every = o.check_every;
  cfg.record_timeseries = !o.timeseries.empty();
  cfg.validate();

  auto streams = run_replicas(cfg);
  Estimates est = merge_estimates(streams);

  const Lattice lat(p);
  const auto column = green_finite_column(p);
  const Coords origin(p.d(), 0);
  const double g00 = column[lat.index_of(origin)];
  const GreenTable table = GreenTable::build_finite(p, p0_displacements(p.d()));
  const double p0 = p0_determinantal(table);

  json params = model_json(p);
  params["burn_in"] = cfg.effective_burn_in();
  params["thinning"] = cfg.thinning;
  params["replicas"] = cfg.replicas;
  params["batches"] = cfg.batches;
  params["check_every"] = cfg.check_every;
  json j = env.open(params, o.seed);
  j["samples"] = est.samples;

  json pa = json::array();
  for (std::size_t alpha = 0; alpha < est.P_alpha.size(); ++alpha) {
    json e = estimator_json(est.P_alpha[alpha]);
    e["alpha"] = alpha;
    pa.push_back(e);
  }
  j["P_alpha"] = pa;
  j["P0_exact"] = zreport_json(compare_to_exact(est.P_alpha[0], p0));
  j["mean_topplings"] = zreport_json(compare_to_exact(est.mean_topplings, 1.0 / p.m()));
  j["mean_waves"] = zreport_json(compare_to_exact(est.mean_waves, g00));

  const int T = p.threshold();
  json pairs = json::array();
  for (std::size_t k = 0; k < est.pairs.size(); ++k)
    for (int al = 0; al < T; ++al)
      for (int be = 0; be < T; ++be) {
        const Estimator& e = est.pair(k, al, be);
        pairs.push_back({{"displacement", coords_json(est.pairs[k])},
                         {"alpha", al},
                         {"beta", be},
                         {"mean", e.mean},
                         {"std_error", e.std_error}});
      }
  j["pair_table"] = pairs;

  json gh = json::array();
  for (SiteIndex i = 0; i < lat.sites(); ++i) {
    const Coords y = lat.coords_of(i);
    const Estimator& e = est.G_hat[i];
    const ZReport z = compare_to_exact(e, column[i]);
    gh.push_back({{"y", coords_json(y)}, {"mean", e.mean}, {"std_error", e.std_error}, {"exact", z.exact}, {"z", z.z}});
  }
  j["G_hat"] = gh;
  j["counters"] = {{"adjacent_subn_pairs", est.adjacent_subn_pairs},
                   {"allowed_checks", est.allowed_checks},
                   {"allowed_failures", est.allowed_failures},
                   {"unstable_samples", est.unstable_samples},
                   {"site_zero_max_rel_dev", est.site_zero_max_rel_dev}};

  if (!o.timeseries.empty()) {
    CsvWriter csv;
    csv.row("replica", "sample", "total_topplings", "waves", "rounds", "zero_fraction");
    for (const auto& s : streams)
      for (const auto& t : s.timeseries)
        csv.row(s.replica_id, t.sample, t.total_topplings, t.waves, t.rounds, t.zero_fraction);
    write_text(o.timeseries, csv.str());
  }
  finish(j, o.output);
  return 0;
}

// ---------------------------------------------------------------- exact

struct ExactOpts {
  ModelOpts model{2, 4, 1, 1};
  std::string output;
};

int run_exact(const ExactOpts& o, const Envelope& env) {
  ModelParams p(o.model.d, o.model.L, o.model.n, o.model.m);
  const double logdet = log_det_delta(p);
  const Lattice lat(p);
  const auto column = green_finite_column(p);
  const GreenTable table = GreenTable::build_finite(p, p0_displacements(p.d()));
  const GValues gv = g_values(table);
  const AsymptoticParams ap = asymptotic_params(p.d(), p.a());

  json j = env.open(model_json(p), std::nullopt);
  j["log_det_delta"] = logdet;
  j["log_recurrent_count"] = recurrent_log_count(p);
  j["G00"] = column[lat.index_of(Coords(p.d(), 0))];
  double row_sum = 0.0;
  for (double g : column) row_sum += g;
  j["G_row_sum"] = row_sum;
  j["G_row_sum_exact"] = 1.0 / p.m();
  j["g_values"] = {{"g0", gv.g0}, {"g1", gv.g1}, {"g2", gv.g2}, {"g3", gv.g3}};
  j["P0_det"] = p0_determinantal(table);
  if (p.sites() <= 10000) j["P0_full_size"] = full_size_determinant(p, {Coords(p.d(), 0)});
  j["xi"] = ap.xi;
  j["lambda"] = ap.lambda;
  finish(j, o.output);
  return 0;
}

// ---------------------------------------------------------------- green

struct GreenOpts {
  int d = 2;
  double a = 0.5;
  int n = 1;
  int radius = 3;
  std::optional<int> L;
  int m = 1;
  std::string method = "bessel";
  double tol = 1e-10;
  std::string output;
};

int run_green(const GreenOpts& o, const Envelope&) {
  if (o.radius < 0) throw InputError("radius must be >= 0");
  const auto xs = box(o.d, o.radius);
  GreenTable table = [&] {
    if (o.L || o.method == "finite") {
      if (!o.L) throw InputError("--method finite needs --L");
      ModelParams p(o.d, *o.L, o.n, o.m);
      return GreenTable::build_finite(p, xs);
    }
    if (!(o.a > 0.0)) throw InputError("a must be > 0");
    if (o.method == "bessel") return GreenTable::build_infinite(o.d, o.a, o.n, xs, o.tol);
    if (o.method == "tensor")
      return GreenTable::build_infinite(o.d, o.a, o.n, xs, o.tol, GreenMethod::infinite_tensor_quadrature);
    throw InputError("unknown method '" + o.method + "'");
  }();
  CsvWriter csv;
  auto& os = csv.stream();
  for (int i = 1; i <= o.d; ++i) os << 'x' << i << ',';
  os << "value,est_abs_error,method\n";
  const std::string method = to_string(table.method());
  for (const auto& x : xs) {
    for (int c : x) os << c << ',';
    os << table.value(x) << ',' << table.abs_error(x) << ',' << method << '\n';
  }
  write_text(o.output, csv.str());
  return 0;
}

// ---------------------------------------------------------------- heights

struct HeightsOpts {
  int d = 2;
  double a = 0.1;
  int n = 1;
  std::optional<int> L;
  int m = 1;
  int k_max = 10;
  double tol = 1e-12;
  std::string output;
  std::string summary;
};

int run_heights(const HeightsOpts& o, const Envelope& env) {
  if (o.k_max < 1) throw InputError("k-max must be >= 1");
  std::set<Coords> need;
  for (const auto& x : p0_displacements(o.d)) need.insert(x);
  std::vector<Coords> diag;
  for (int k = 1; k <= o.k_max; ++k) {
    Coords x = diagonal_point(o.d, k);
    if (k * k * o.d < 4) continue;
    if (o.L && k >= *o.L) break;
    diag.push_back(x);
    for (const auto& y : p00_displacements(o.d, x)) need.insert(y);
  }
  const std::vector<Coords> xs(need.begin(), need.end());

  std::optional<ModelParams> p;
  double a = o.a;
  int n = o.n;
  if (o.L) {
    p.emplace(o.d, *o.L, o.n, o.m);
    a = p->a();
  } else if (!(a > 0.0)) {
    throw InputError("a must be > 0");
  }
  const GreenTable table =
      p ? GreenTable::build_finite(*p, xs) : GreenTable::build_infinite(o.d, a, n, xs, o.tol);
  const GValues gv = g_values(table);
  const AsymptoticParams ap = asymptotic_params(o.d, a);

  CsvWriter csv;
  csv.row("k", "r", "P00", "C00", "reliable_flag");
  const double sd = std::sqrt(static_cast<double>(o.d));
  for (const auto& x : diag) {
    const PairResult pr = p00_c00(table, x);
    csv.row(x[0], x[0] * sd, pr.P00, pr.C00, pr.reliable ? 1 : 0);
  }
  write_text(o.output, csv.str());

  json params = p ? model_json(*p) : json{{"d", o.d}, {"a", a}, {"n", n}};
  params["k_max"] = o.k_max;
  json j = env.open(params, std::nullopt);
  j["P0_det"] = p0_determinantal(table);
  j["P0_closed"] = p0_closed_form(gv, o.d, a, n);
  j["c2"] = c2_factor(gv, o.d, a, n);
  j["xi"] = ap.xi;
  j["lambda"] = ap.lambda;
  j["g_values"] = {{"g0", gv.g0}, {"g1", gv.g1}, {"g2", gv.g2}, {"g3", gv.g3}};
  std::string summary = o.summary;
  if (summary.empty() && !o.output.empty() && o.output != "-") summary = o.output + ".json";
  if (summary.empty()) {
    j["timestamps"]["finished"] = utc_now();
    std::cerr << j.dump(2) << "\n";
  } else {
    finish(j, summary);
  }
  return 0;
}

// ---------------------------------------------------------------- enumerate

struct EnumerateOpts {
  ModelOpts model{2, 1, 1, 1};
  std::int64_t max_states = kMaxEnumerationStates;
  bool fsc = false;
  std::string output;
};

int run_enumerate(const EnumerateOpts& o, const Envelope& env) {
  ModelParams p(o.model.d, o.model.L, o.model.n, o.model.m);
  json j = env.open(model_json(p), std::nullopt);
  const auto t0 = std::chrono::steady_clock::now();
  const std::int64_t count = enumerate_allowed_count(p, o.max_states);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double oracle = std::exp(recurrent_log_count(p));
  const auto oracle_int = static_cast<std::int64_t>(std::llround(oracle));
  j["timestamps"]["elapsed_s"] = elapsed;
  j["total_states"] = std::pow(static_cast<double>(p.threshold()), static_cast<double>(p.sites()));
  j["log_det"] = log_det_delta(p);
  j["allowed_count"] = count;
  j["determinant_count"] = oracle_int;
  j["match"] = count == oracle_int;
  if (o.fsc) {
    const FscSweepResult r = fsc_burning_sweep(p, o.max_states);
    j["fsc_sweep"] = {{"total", r.total}, {"allowed", r.allowed}, {"disagreements", r.disagreements}};
  }
  finish(j, o.output);
  return count == oracle_int ? 0 : 2;
}

// ---------------------------------------------------------------- scaling

struct ScalingOpts {
  int d = 2;
  std::string a_grid = "1e-1:1e-5:log";
  std::optional<double> fit_min, fit_max;
  std::vector<double> kappas;
  bool no_c00_table = false;
  bool from_c00 = false;
  double r_lo = 2.0;
  int k_max = 40;
  std::string output;
  std::string table;
};

int run_scaling(const ScalingOpts& o, const Envelope& env) {
  SweepSpec spec;
  spec.d = o.d;
  spec.a_values = parse_a_grid(o.a_grid);
  spec.fit_min = o.fit_min.value_or(spec.a_values.back());
  spec.fit_max = o.fit_max.value_or(spec.a_values.front());
  const FitResult fit = xi_sweep_and_fit(spec);

  json params = {{"d", o.d}, {"a_grid", o.a_grid}, {"a_values", spec.a_values},
                 {"fit_window", {spec.fit_min, spec.fit_max}}};
  json j = env.open(params, std::nullopt);
  j["nu_a"] = fit.nu_a;
  j["prefactor"] = fit.prefactor;
  j["prefactor_expected"] = 1.0 / std::sqrt(2.0 * o.d);
  j["r_squared"] = fit.r_squared;
  json pts = json::array();
  for (std::size_t i = 0; i < fit.a.size(); ++i) {
    const AsymptoticParams ap = asymptotic_params(o.d, fit.a[i]);
    pts.push_back({{"a", fit.a[i]}, {"xi", fit.xi[i]}, {"lambda", ap.lambda}, {"residual", fit.residuals[i]}});
  }
  j["points"] = pts;

  if (o.from_c00) {
    std::vector<json> rows(spec.a_values.size());
    bool any_failed = false;
    for (std::size_t i = 0; i < spec.a_values.size(); ++i) {
      const double a = spec.a_values[i];
      const double xi = asymptotic_params(o.d, a).xi;
      try {
        const DecayFit df = fit_c00_decay(o.d, a, 1, o.r_lo, o.k_max);
        rows[i] = {{"a", a}, {"rate", df.rate}, {"expected", 2.0 / xi}, {"rel_error", df.rate * xi / 2.0 - 1.0},
                   {"points", df.points}, {"r_lo", df.r_lo}, {"r_hi", df.r_hi}};
      } catch (const InputError& e) {
        any_failed = true;
        rows[i] = {{"a", a}, {"error", e.what()}};
      }
    }
    j["c00_decay"] = rows;
    j["c00_decay_partial"] = any_failed;
  }

  if (!o.kappas.empty()) {
    const auto table = scaling_function_check(o.d, o.kappas, spec.a_values, !o.no_c00_table);
    CsvWriter csv;
    csv.row("quantity", "gbar_variant", "kappa_target", "a", "k", "r", "kappa", "lattice_value", "scaling_value",
            "ratio", "reliable_flag");
    for (const auto& r : table)
      csv.row(r.quantity, r.gbar_variant, r.kappa_target, r.a, r.k, r.r, r.kappa, r.lattice_value, r.scaling_value,
              r.ratio, r.reliable ? 1 : 0);
    if (o.table.empty()) {
      json rows = json::array();
      for (const auto& r : table)
        rows.push_back({{"quantity", r.quantity}, {"gbar_variant", r.gbar_variant}, {"kappa_target", r.kappa_target},
                        {"a", r.a}, {"k", r.k}, {"r", r.r}, {"kappa", r.kappa}, {"lattice_value", r.lattice_value},
                        {"scaling_value", r.scaling_value}, {"ratio", r.ratio}, {"reliable", r.reliable}});
      j["scaling_table"] = rows;
    } else {
      write_text(o.table, csv.str());
    }
  }
  finish(j, o.output);
  return 0;
}

using ConfigPaths = std::map<CLI::App*, std::string>;

void add_config(CLI::App* app, ConfigPaths& config_paths) {
  app->add_option("--config", config_paths[app], "Flat key = value file; command-line flags take precedence");
}

// Fills options not given on the command line from the config file.
void apply_config(CLI::App* app, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  const auto items = CLI::ConfigINI().from_config(in);
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty()) throw InputError("config sections are not supported: '" + item.fullname() + "'");
    if (item.name == "config") throw InputError("config files cannot nest");
    CLI::Option* op = app->get_option_no_throw("--" + item.name);
    if (op == nullptr) throw InputError("unknown config key '" + item.name + "'");
    if (op->count() > 0) continue;
    op->add_result(item.inputs);
    op->run_callback();
  }
}

}  // namespace

int cli_main(int argc, char** argv) {
  configure_threads();
  CLI::App app{"Dissipative abelian sandpile toolkit"};
  ConfigPaths config_paths;
  app.require_subcommand(1);
  app.set_version_flag("--version", SANDLAB_VERSION);

  SimulateOpts sim;
  auto* s = app.add_subcommand("simulate", "Run the Markov chain and report estimators");
  add_config(s, config_paths);
  add_model_opts(s, sim.model);
  s->add_option("--seed", sim.seed)->capture_default_str();
  s->add_option("--samples", sim.samples)->capture_default_str();
  s->add_option("--burn-in", sim.burn_in, "Negative: 100 * sites")->capture_default_str();
  s->add_option("--thinning", sim.thinning)->capture_default_str();
  s->add_option("--replicas", sim.replicas)->capture_default_str();
  s->add_option("--batches", sim.batches)->capture_default_str();
  s->add_option("--check-every", sim.check_every, "Burning check period; 0 disables")->capture_default_str();
  s->add_option("--output,-o", sim.output, "JSON report path (stdout if empty)");
  s->add_option("--timeseries", sim.timeseries, "CSV time series path");

  ExactOpts ex;
  auto* e = app.add_subcommand("exact", "Exact finite-torus quantities");
  add_config(e, config_paths);
  add_model_opts(e, ex.model);
  e->add_option("--output,-o", ex.output);

  GreenOpts gr;
  auto* g = app.add_subcommand("green", "Tabulate the avalanche propagator");
  add_config(g, config_paths);
  g->add_option("--dim,-d", gr.d)->capture_default_str();
  g->add_option("--a", gr.a, "Dissipation rate (infinite volume)")->capture_default_str();
  g->add_option("--n", gr.n)->capture_default_str();
  g->add_option("--m", gr.m, "Finite torus only")->capture_default_str();
  g->add_option("--L", gr.L, "Use the finite torus of half-width L");
  g->add_option("--radius", gr.radius)->capture_default_str();
  g->add_option("--method", gr.method)->check(CLI::IsMember({"bessel", "tensor", "finite"}))->capture_default_str();
  g->add_option("--tol", gr.tol)->capture_default_str();
  g->add_option("--output,-o", gr.output, "CSV path (stdout if empty)");

  HeightsOpts he;
  auto* h = app.add_subcommand("heights", "Height probabilities and height-(0,0) correlations");
  add_config(h, config_paths);
  h->add_option("--dim,-d", he.d)->capture_default_str();
  h->add_option("--a", he.a)->capture_default_str();
  h->add_option("--n", he.n)->capture_default_str();
  h->add_option("--m", he.m, "Finite torus only")->capture_default_str();
  h->add_option("--L", he.L, "Use the finite torus of half-width L");
  h->add_option("--k-max", he.k_max, "Largest diagonal step")->capture_default_str();
  h->add_option("--tol", he.tol)->capture_default_str();
  h->add_option("--output,-o", he.output, "CSV path (stdout if empty)");
  h->add_option("--summary", he.summary, "JSON summary path (default <output>.json)");

  EnumerateOpts en;
  auto* n = app.add_subcommand("enumerate", "Count allowed configurations by burning");
  add_config(n, config_paths);
  add_model_opts(n, en.model);
  n->add_option("--max-states", en.max_states)->capture_default_str();
  n->add_flag("--fsc", en.fsc, "Also compare burning with exhaustive FSC search");
  n->add_option("--output,-o", en.output);

  ScalingOpts sc;
  auto* c = app.add_subcommand("scaling", "Correlation-length exponent and scaling functions");
  add_config(c, config_paths);
  c->add_option("--dim,-d", sc.d)->capture_default_str();
  c->add_option("--a-grid", sc.a_grid, "hi:lo:log[:per_decade] or a comma list")->capture_default_str();
  c->add_option("--fit-min", sc.fit_min);
  c->add_option("--fit-max", sc.fit_max);
  c->add_option("--kappa", sc.kappas, "Scaling-function check at these kappa values")->delimiter(',');
  c->add_flag("--no-c00-table", sc.no_c00_table, "Skip C00 rows in the scaling-function table");
  c->add_flag("--from-c00", sc.from_c00, "Also fit exact C00 decay rates against 2/xi");
  c->add_option("--r-lo", sc.r_lo)->capture_default_str();
  c->add_option("--k-max", sc.k_max)->capture_default_str();
  c->add_option("--output,-o", sc.output);
  c->add_option("--table", sc.table, "CSV path for the scaling-function table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForVersion& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return 1;
  }

  Envelope env;
  env.started = utc_now();
  try {
    for (CLI::App* sub : app.get_subcommands()) apply_config(sub, config_paths[sub]);
    if (*s) return env.command = "simulate", run_simulate(sim, env);
    if (*e) return env.command = "exact", run_exact(ex, env);
    if (*g) return env.command = "green", run_green(gr, env);
    if (*h) return env.command = "heights", run_heights(he, env);
    if (*n) return env.command = "enumerate", run_enumerate(en, env);
    if (*c) return env.command = "scaling", run_scaling(sc, env);
  } catch (const CLI::ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const InputError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const NumericalError& ex) {
    std::cerr << "numerical error: " << ex.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::out_of_range& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace sandlab
