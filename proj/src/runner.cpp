#include "spinlab/cli.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "spinlab/decay.hpp"
#include "spinlab/detect.hpp"
#include "spinlab/error.hpp"
#include "spinlab/estimate.hpp"
#include "spinlab/exact.hpp"
#include "spinlab/format.hpp"
#include "spinlab/props.hpp"
#include "spinlab/rcm.hpp"
#include "spinlab/samplers.hpp"

namespace spinlab {

namespace fs = std::filesystem;
using nlohmann::json;

int apply_thread_setting(const Config& cfg) {
  long threads = cfg.get_long("threads", 0);
  if (const char* env = std::getenv("SPINLAB_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError(std::string("SPINLAB_THREADS must be a positive integer, got '") + env + "'");
    threads = v;
  }
  if (threads > 0) omp_set_num_threads(static_cast<int>(threads));
  return omp_get_max_threads();
}

namespace {

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  std::ofstream open(const std::string& name) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    names_.push_back(name);
    return f;
  }
  void write_json(const std::string& name, const json& j) { open(name) << j.dump(2) << '\n'; }
  std::vector<std::string> names() const { return names_; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

// Non-finite values have no JSON literal; they are written as strings.
json num(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

std::uint64_t master_seed(const Config& cfg) { return cfg.get_u64("seed", 1); }

SamplerChoice sampler_choice(const std::string& s) {
  if (s == "auto") return SamplerChoice::Auto;
  if (s == "glauber") return SamplerChoice::Glauber;
  if (s == "cluster") return SamplerChoice::Cluster;
  if (s == "direct") return SamplerChoice::CurieWeissDirect;
  throw ConfigError("unknown sampler '" + s + "'");
}

void run_sample(const Config& cfg, Outputs& out) {
  const auto g = graph_from_config(cfg);
  const auto p = params_from_config(cfg, g);
  validate(g, p);
  std::string sampler = cfg.get("sample.sampler", "auto");
  const long sweeps = cfg.get_long("sample.sweeps", 1000);
  const std::uint64_t seed = master_seed(cfg);

  auto f = out.open("samples.csv");
  for (std::size_t v = 0; v < g.size(); ++v) f << (v ? "," : "") << 'x' << v;
  f << '\n';
  std::size_t draws = 0;
  double mag = 0.0;
  auto emit = [&](const SpinConfig& x) {
    for (std::size_t v = 0; v < x.size(); ++v) f << (v ? "," : "") << static_cast<int>(x.spins[v]);
    f << '\n';
    ++draws;
    mag += static_cast<double>(x.magnetization());
  };

  if (sampler == "direct") {
    const CurieWeissDirect cw(g.size(), p.beta, p.mu);
    for (long r = 0; r < sweeps; ++r) {
      Rng rng(derive_seed(seed, 0, static_cast<std::uint64_t>(r)));
      emit(cw.draw(rng));
    }
  } else {
    if (sampler == "auto") {
      bool ok = p.beta >= 0.0;
      for (double m : p.mu) ok = ok && (p.boundary == Boundary::Minus ? m <= 0.0 : m >= 0.0);
      sampler = ok ? "cluster" : "glauber";
    }
    ChainSpec spec;
    spec.update = parse_update(sampler);
    spec.burn_in = cfg.get_long("sample.burn_in", default_burn_in(spec.update, g.size()));
    spec.sweeps = spec.burn_in + sweeps;
    spec.thin = cfg.get_long("sample.thin", 1);
    spec.seed = seed;
    run_chain(g, p, spec, emit);
  }
  out.write_json("summary.json", {{"sampler", sampler},
                                  {"draws", draws},
                                  {"n", g.size()},
                                  {"mean_magnetization", num(draws ? mag / static_cast<double>(draws) : 0.0)}});
}

void run_exact(const Config& cfg, Outputs& out) {
  const auto g = graph_from_config(cfg);
  const auto p = params_from_config(cfg, g);
  const Kernel kernel = cfg.get("exact.kernel", "parallel") == "serial" ? Kernel::Serial : Kernel::Parallel;
  const auto m = exact_moments(g, p, kernel);
  auto f = out.open("moments.csv");
  f << "i,j,mean_i,mean_j,cov\n";
  const auto n = static_cast<Vertex>(g.size());
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i; j < n; ++j)
      f << i << ',' << j << ',' << format_double(m.means[i]) << ',' << format_double(m.means[j]) << ','
        << format_double(m.cov(i, j)) << '\n';
  out.write_json("summary.json", {{"n", g.size()},
                                  {"free_spins", free_vertices(g, p.boundary).size()},
                                  {"log_z", num(m.log_z)},
                                  {"kernel", kernel == Kernel::Serial ? "serial" : "parallel"}});
}

void run_rc_check(const Config& cfg, Outputs& out) {
  const auto g = graph_from_config(cfg);
  const auto p = params_from_config(cfg, g);
  const double bond_p = es_bond_probability(p.beta);
  const auto n = static_cast<Vertex>(g.size());
  auto f = out.open("rc_check.csv");
  f << "kind,i,j,random_cluster,spin,abs_diff\n";

  const auto free_m = exact_moments(g, IsingParams::zero_field(g.size(), p.beta, Boundary::Free));
  const auto xi_free = BoundaryPartition::free(g);
  double worst_pair = 0.0;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) {
      const double rc = rc_exact_connectivity(g, bond_p, xi_free, i, j);
      const double spin = free_m.second(i, j);
      worst_pair = std::max(worst_pair, std::abs(rc - spin));
      f << "pair," << i << ',' << j << ',' << format_double(rc) << ',' << format_double(spin) << ','
        << format_double(std::abs(rc - spin)) << '\n';
    }

  json summary{{"beta", p.beta}, {"p", bond_p}, {"max_abs_diff_pairs", num(worst_pair)}};
  double worst_bnd = 0.0;
  if (!g.boundary().empty()) {
    const auto plus_m = exact_moments(g, IsingParams::zero_field(g.size(), p.beta, Boundary::Plus));
    const auto xi_wired = BoundaryPartition::wired(g);
    for (Vertex i = 0; i < n; ++i) {
      const double rc = rc_exact_boundary_connectivity(g, bond_p, xi_wired, i);
      const double spin = plus_m.means[i];
      worst_bnd = std::max(worst_bnd, std::abs(rc - spin));
      f << "boundary," << i << ",-1," << format_double(rc) << ',' << format_double(spin) << ','
        << format_double(std::abs(rc - spin)) << '\n';
    }
    summary["max_abs_diff_boundary"] = num(worst_bnd);
  }
  summary["pass"] = worst_pair <= 1e-9 && worst_bnd <= 1e-9;
  out.write_json("summary.json", summary);
}

void run_risk_sweep(const Config& cfg, Outputs& out) {
  const auto g = graph_from_config(cfg);
  const auto p = params_from_config(cfg, g);
  RiskSpec spec;
  spec.boundary = p.boundary;
  if (cfg.has("risk.cutoff")) spec.cutoff = cfg.get_double("risk.cutoff", 0.0);
  if (cfg.has("risk.center")) spec.center = cfg.get_double("risk.center", 0.0);
  for (const auto& s : cfg.get_strings("risk.placements")) spec.adversaries.push_back(parse_placement(s));
  spec.sampler = sampler_choice(cfg.get("risk.sampler", "auto"));
  spec.sweeps = cfg.get_long("risk.sweeps", 0);
  SignalClass shape;
  shape.value_rule = cfg.get("risk.value_rule", "exactly") == "at_least" ? ValueRule::AtLeastA : ValueRule::ExactlyA;
  shape.cap = cfg.get_double("risk.cap", 0.0);
  if (!spec.adversaries.empty()) shape.placement = spec.adversaries.front();
  const auto s = static_cast<std::size_t>(cfg.get_long("risk.s", 1));
  const auto curve = detection_sweep(g, p.beta, s, cfg.get_doubles("risk.A_grid"),
                                     static_cast<std::size_t>(cfg.get_long("risk.replicates", 500)), master_seed(cfg),
                                     spec, shape);
  auto f = out.open("risk.csv");
  write_risk_csv(f, curve);
  json rows = json::array();
  for (const auto& r : curve)
    rows.push_back({{"A", r.A},
                    {"cutoff", num(r.cutoff)},
                    {"center", num(r.center)},
                    {"worst_placement", to_string(r.worst_placement)},
                    {"se_type_I", num(r.se_type_I)},
                    {"se_type_II", num(r.se_type_II)}});
  out.write_json("summary.json", {{"n", g.size()}, {"s", s}, {"rows", rows}});
}

void run_decay(const Config& cfg, Outputs& out) {
  const auto g = graph_from_config(cfg);
  const auto p = params_from_config(cfg, g);
  TwoPointSpec spec;
  spec.sweeps = cfg.get_long("decay.sweeps", spec.sweeps);
  spec.burn_in = cfg.get_long("decay.burn_in", spec.burn_in);
  spec.replicas = static_cast<std::size_t>(cfg.get_long("decay.replicas", static_cast<long>(spec.replicas)));
  spec.max_distance = static_cast<int>(cfg.get_long("decay.max_distance", 0));
  spec.margin = cfg.get_double("decay.margin", spec.margin);
  spec.seed = master_seed(cfg);
  const auto table = measure_two_point(g, p.beta, p.boundary, spec);
  auto f = out.open("two_point.csv");
  write_two_point_csv(f, table);

  json summary{{"beta", p.beta}, {"boundary", to_string(p.boundary)}};
  try {
    const auto fit = fit_decay_rate(table);
    summary["fit"] = {{"rate", num(fit.rate)},
                      {"intercept", num(fit.intercept)},
                      {"r2", num(fit.r2)},
                      {"rate_se", num(fit.rate_se)},
                      {"used", fit.used}};
  } catch (const DegenerateError& e) {
    summary["fit"] = nullptr;
    summary["fit_error"] = e.what();
  }
  if (table.size() >= 3) {
    const auto tr = decay_trend(table);
    summary["spearman_rho"] = num(tr.rho);
    summary["spearman_p"] = num(tr.p_value);
  }
  out.write_json("summary.json", summary);
}

void run_estimate(const Config& cfg, Outputs& out) {
  MseSpec spec;
  spec.beta = cfg.get_double("model.beta", 0.0);
  spec.h = cfg.get_double("model.h", 0.0);
  for (long n : cfg.get_longs("estimate.n_grid")) spec.n_grid.push_back(static_cast<std::size_t>(n));
  spec.replicates = static_cast<std::size_t>(cfg.get_long("estimate.replicates", 200));
  spec.sweeps = cfg.get_long("estimate.sweeps", 0);
  spec.seed = master_seed(cfg);
  spec.bound_mc.sweeps = cfg.get_long("estimate.bound_sweeps", spec.bound_mc.sweeps);
  spec.bound_mc.burn_in = cfg.get_long("estimate.bound_burn_in", spec.bound_mc.burn_in);
  spec.bound_mc.seed = derive_seed(spec.seed, 0x62);
  const std::string kind = cfg.get("graph.kind", "lattice");
  const GraphFactory factory = kind == "curie_weiss" ? GraphFactory([](std::size_t n) { return build_curie_weiss(n); })
                                                     : GraphFactory(square_lattice_of_size);
  const auto rows = mse_experiment(factory, spec);
  auto f = out.open("mse.csv");
  write_mse_csv(f, rows);
  const auto& last = rows.back();
  out.write_json("summary.json", {{"beta", spec.beta},
                                  {"h", spec.h},
                                  {"graph", kind},
                                  {"slope_total", num(last.slope_running)},
                                  {"slope_beta", num(last.slope_beta)},
                                  {"slope_h", num(last.slope_h)}});
}

void run_inequalities(const Config& cfg, Outputs& out) {
  FamilySpec spec;
  spec.systems = static_cast<std::size_t>(cfg.get_long("inequalities.systems", static_cast<long>(spec.systems)));
  spec.max_n = static_cast<std::size_t>(cfg.get_long("inequalities.max_n", static_cast<long>(spec.max_n)));
  spec.max_beta = cfg.get_double("inequalities.max_beta", spec.max_beta);
  spec.max_field = cfg.get_double("inequalities.max_field", spec.max_field);
  spec.edge_prob = cfg.get_double("inequalities.edge_prob", spec.edge_prob);
  spec.fkg_trials = static_cast<std::size_t>(cfg.get_long("inequalities.fkg_trials", static_cast<long>(spec.fkg_trials)));
  spec.seed = master_seed(cfg);
  auto names = cfg.get_strings("inequalities.checks");
  if (names.empty()) names = check_names();
  std::vector<CheckReport> reports;
  for (const auto& name : names) reports.push_back(run_check(name, spec));
  auto f = out.open("inequalities.json");
  write_reports_json(f, reports);
}

void run_critical(const Config& cfg, Outputs& out) {
  CriticalScalingSpec spec;
  spec.d = 2;
  for (long s : cfg.get_longs("critical.sides")) spec.sides.push_back(static_cast<int>(s));
  spec.beta = cfg.get_double("critical.beta", critical_beta::square_lattice());
  spec.field_grid = cfg.get_doubles("critical.field_grid");
  spec.sweeps = cfg.get_long("critical.sweeps", spec.sweeps);
  spec.burn_in = cfg.get_long("critical.burn_in", spec.burn_in);
  spec.seed = master_seed(cfg);
  const auto res = critical_scaling_experiment(spec);
  auto f = out.open("critical.csv");
  write_critical_csv(f, res);
}

}  // namespace

std::vector<std::string> run_experiment(const Config& cfg, const fs::path& out_dir) {
  Outputs out(out_dir);
  const std::string exp = cfg.get("experiment");
  if (exp == "sample") run_sample(cfg, out);
  else if (exp == "exact") run_exact(cfg, out);
  else if (exp == "rc-check") run_rc_check(cfg, out);
  else if (exp == "risk-sweep") run_risk_sweep(cfg, out);
  else if (exp == "decay") run_decay(cfg, out);
  else if (exp == "estimate") run_estimate(cfg, out);
  else if (exp == "check-inequalities") run_inequalities(cfg, out);
  else if (exp == "critical-scaling") run_critical(cfg, out);
  else throw ConfigError("unknown experiment '" + exp + "'");
  return out.names();
}

int cli_run(const std::string& config_path, const std::optional<std::string>& output_dir, std::ostream& out,
            std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Config cfg;
  int threads = 0;
  try {
    cfg = Config::load(config_path);
    const auto violations = validate_config(cfg);
    if (!violations.empty()) {
      for (const auto& v : violations) err << "invalid config: " << v << '\n';
      return kExitInvalid;
    }
    threads = apply_thread_setting(cfg);
  } catch (const Error& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalid;
  }

  const fs::path dir = output_dir ? fs::path(*output_dir) : fs::path(cfg.get("output", "out/" + cfg.get("experiment")));
  std::vector<std::string> files;
  try {
    files = run_experiment(cfg, dir);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const SizeError& e) {
    err << "size cap: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ParameterError& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest{{"experiment", cfg.get("experiment")},
                {"config_hash", config_hash(cfg)},
                {"config_path", config_path},
                {"config", cfg.text()},
                {"master_seed", master_seed(cfg)},
                {"seed_derivation", "replica r of stream s uses splitmix64 mixing of (master_seed, s, r)"},
                {"version", kVersion},
                {"threads", threads},
                {"wall_time_seconds", wall},
                {"outputs", files}};
  try {
    std::ofstream m(dir / "manifest.json", std::ios::binary);
    m << manifest.dump(2) << '\n';
    if (!m) throw std::runtime_error("cannot write manifest");
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
  out << "wrote " << files.size() << " result file(s) and manifest.json to " << dir.string() << '\n';
  return kExitOk;
}

int cli_validate(const std::string& config_path, std::ostream& out) {
  std::vector<std::string> violations;
  try {
    violations = validate_config(Config::load(config_path));
  } catch (const Error& e) {
    violations.emplace_back(e.what());
  }
  if (violations.empty()) {
    out << "ok\n";
    return kExitOk;
  }
  for (const auto& v : violations) out << v << '\n';
  return kExitInvalid;
}

}  // namespace spinlab
