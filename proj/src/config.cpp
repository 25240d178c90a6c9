#include "spinlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "spinlab/detect.hpp"
#include "spinlab/error.hpp"
#include "spinlab/exact.hpp"
#include "spinlab/props.hpp"
#include "spinlab/rcm.hpp"
#include "spinlab/samplers.hpp"

namespace spinlab {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end) throw ConfigError("key '" + key + "': cannot parse '" + text + "' as a number");
  return value;
}

// Top-level model keys are accepted as shorthand for [model].
const std::set<std::string> kModelShorthand{"beta", "h", "field", "boundary"};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"", {"experiment", "seed", "output", "threads"}},
      {"graph", {"kind", "d", "side", "n", "lambda", "seed", "k", "depth", "path"}},
      {"model", {"beta", "h", "field", "boundary"}},
      {"sample", {"sampler", "sweeps", "burn_in", "thin"}},
      {"exact", {"kernel"}},
      {"rc", {}},
      {"risk", {"s", "A_grid", "replicates", "placements", "value_rule", "cap", "cutoff", "center", "sampler", "sweeps"}},
      {"decay", {"sweeps", "burn_in", "replicas", "max_distance", "margin"}},
      {"estimate", {"n_grid", "replicates", "sweeps", "bound_sweeps", "bound_burn_in"}},
      {"inequalities", {"systems", "max_n", "max_beta", "max_field", "edge_prob", "fkg_trials", "checks"}},
      {"critical", {"sides", "beta", "field_grid", "sweeps", "burn_in"}},
  };
  return s;
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string line, section;
  std::ostringstream text;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    text << line << '\n';
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");

    if (section.empty() && key == "graph") {
      // Inline form: graph = <kind> key=value ...
      const auto parts = split_list(value);
      if (parts.empty()) throw ConfigError("line " + std::to_string(lineno) + ": graph needs a kind");
      cfg.entries_["graph.kind"] = parts[0];
      for (std::size_t p = 1; p < parts.size(); ++p) {
        const auto e = parts[p].find('=');
        if (e == std::string::npos || e == 0)
          throw ConfigError("line " + std::to_string(lineno) + ": graph option '" + parts[p] + "' is not key=value");
        cfg.entries_["graph." + parts[p].substr(0, e)] = parts[p].substr(e + 1);
      }
      continue;
    }
    if (section.empty() && kModelShorthand.count(key)) key = "model." + key;
    else if (!section.empty()) key = section + "." + key;
    if (cfg.entries_.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    cfg.entries_[key] = value;
  }
  cfg.text_ = text.str();
  return cfg;
}

Config Config::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in);
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? parse_number<double>(key, get(key)) : fallback;
}

long Config::get_long(const std::string& key, long fallback) const {
  return has(key) ? parse_number<long>(key, get(key)) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get(key);
  if (v.rfind("0x", 0) == 0) {
    std::uint64_t out = 0;
    const char* end = v.data() + v.size();
    const auto res = std::from_chars(v.data() + 2, end, out, 16);
    if (res.ec != std::errc{} || res.ptr != end) throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a seed");
    return out;
  }
  return parse_number<std::uint64_t>(key, v);
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : split_list(get(key))) out.push_back(parse_number<double>(key, s));
  return out;
}

std::vector<long> Config::get_longs(const std::string& key) const {
  std::vector<long> out;
  for (const auto& s : split_list(get(key))) out.push_back(parse_number<long>(key, s));
  return out;
}

std::vector<std::string> Config::get_strings(const std::string& key) const { return split_list(get(key)); }

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"sample",   "exact",    "rc-check",           "risk-sweep",
                                              "decay",    "estimate", "check-inequalities", "critical-scaling"};
  return names;
}

std::string config_hash(const Config& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : cfg.text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

InteractionGraph graph_from_config(const Config& cfg) {
  const std::string kind = cfg.get("graph.kind");
  if (kind.empty()) throw ConfigError("graph.kind is required");
  if (kind == "lattice") {
    const long d = cfg.get_long("graph.d", 2);
    const long side = cfg.get_long("graph.side", 0);
    if (d < 1 || side < 2) throw ConfigError("lattice needs d >= 1 and side >= 2");
    if (std::pow(static_cast<double>(side), static_cast<double>(d)) > static_cast<double>(kMaxVertices))
      throw ConfigError("lattice exceeds the vertex cap of " + std::to_string(kMaxVertices));
    return build_lattice(static_cast<int>(d), static_cast<int>(side));
  }
  if (kind == "curie_weiss") {
    const long n = cfg.get_long("graph.n", 0);
    if (n < 2 || n > static_cast<long>(kMaxVertices)) throw ConfigError("curie_weiss needs 2 <= n <= vertex cap");
    return build_curie_weiss(static_cast<std::size_t>(n));
  }
  if (kind == "erdos_renyi") {
    const long n = cfg.get_long("graph.n", 0);
    const double lambda = cfg.get_double("graph.lambda", 0.0);
    if (n < 2 || n > static_cast<long>(kMaxVertices)) throw ConfigError("erdos_renyi needs 2 <= n <= vertex cap");
    if (!(lambda > 0.0 && lambda < static_cast<double>(n))) throw ConfigError("erdos_renyi needs 0 < lambda < n");
    const std::uint64_t seed = cfg.get_u64("graph.seed", cfg.get_u64("seed", 1));
    return build_erdos_renyi(static_cast<std::size_t>(n), lambda, seed);
  }
  if (kind == "regular_tree") {
    const long k = cfg.get_long("graph.k", 0);
    const long depth = cfg.get_long("graph.depth", 0);
    if (k < 2 || depth < 1) throw ConfigError("regular_tree needs k >= 2 and depth >= 1");
    if (static_cast<double>(depth) * std::log(static_cast<double>(k)) > std::log(static_cast<double>(kMaxVertices)))
      throw ConfigError("regular_tree exceeds the vertex cap");
    return build_regular_tree(static_cast<int>(k), static_cast<int>(depth));
  }
  if (kind == "edge_list") {
    const std::string path = cfg.get("graph.path");
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open edge list '" + path + "'");
    return read_edge_list(in);
  }
  throw ConfigError("unknown graph kind '" + kind + "'");
}

IsingParams params_from_config(const Config& cfg, const InteractionGraph& g) {
  IsingParams p;
  p.beta = cfg.get_double("model.beta", 0.0);
  p.boundary = Boundary::Free;
  if (cfg.has("model.boundary")) {
    try {
      p.boundary = parse_boundary(cfg.get("model.boundary"));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (cfg.has("model.field")) {
    if (cfg.has("model.h")) throw ConfigError("give either model.h or model.field, not both");
    p.mu = cfg.get_doubles("model.field");
    if (p.mu.size() != g.size())
      throw ConfigError("model.field has " + std::to_string(p.mu.size()) + " entries for " + std::to_string(g.size()) +
                        " vertices");
  } else {
    p.mu.assign(g.size(), cfg.get_double("model.h", 0.0));
  }
  if (!std::isfinite(p.beta)) throw ConfigError("beta must be finite");
  for (double m : p.mu)
    if (!std::isfinite(m)) throw ConfigError("field entries must be finite");
  if (p.boundary != Boundary::Free && (g.kind() != GraphKind::Lattice || g.boundary().empty()))
    throw ConfigError("plus/minus boundary conditions need a lattice");
  return p;
}

namespace {

bool strictly_increasing(const auto& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

class Validator {
 public:
  template <class F>
  void check(F&& f) {
    try {
      f();
    } catch (const Error& e) {
      out.emplace_back(e.what());
    }
  }
  void fail(const std::string& msg) { out.push_back(msg); }
  void require(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
  }

  std::vector<std::string> out;
};

bool cluster_field_ok(const IsingParams& p) {
  for (double m : p.mu)
    if (p.boundary == Boundary::Minus ? m > 0.0 : m < 0.0) return false;
  return true;
}

bool zero_field(const IsingParams& p) {
  return std::all_of(p.mu.begin(), p.mu.end(), [](double m) { return m == 0.0; });
}

}  // namespace

std::vector<std::string> validate_config(const Config& cfg) {
  Validator v;

  // Schema: known sections and keys.
  const auto& sch = schema();
  for (const auto& [key, value] : cfg.entries()) {
    const auto dot = key.find('.');
    const std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
    const auto it = sch.find(sec);
    if (it == sch.end())
      v.fail("unknown section [" + sec + "]");
    else if (!it->second.count(name))
      v.fail("unknown key '" + key + "'");
  }

  const std::string exp = cfg.get("experiment");
  const auto& names = experiment_names();
  if (exp.empty()) {
    v.fail("experiment is required (one of sample, exact, rc-check, risk-sweep, decay, estimate, check-inequalities, critical-scaling)");
    return v.out;
  }
  if (std::find(names.begin(), names.end(), exp) == names.end()) {
    v.fail("unknown experiment '" + exp + "'");
    return v.out;
  }
  v.check([&] { cfg.get_u64("seed", 1); });
  v.check([&] {
    if (cfg.get_long("threads", 1) < 1) v.fail("threads must be >= 1");
  });

  if (exp == "check-inequalities") {
    v.check([&] {
      const long systems = cfg.get_long("inequalities.systems", 200);
      const long max_n = cfg.get_long("inequalities.max_n", 5);
      v.require(systems >= 1, "inequalities.systems must be >= 1");
      v.require(max_n >= 1 && max_n <= 12, "inequalities.max_n must be in [1, 12]");
      v.require(cfg.get_double("inequalities.max_beta", 1.5) >= 0.0, "inequalities.max_beta must be >= 0");
      v.require(cfg.get_double("inequalities.max_field", 1.0) >= 0.0, "inequalities.max_field must be >= 0");
      const double ep = cfg.get_double("inequalities.edge_prob", 0.6);
      v.require(ep >= 0.0 && ep <= 1.0, "inequalities.edge_prob must be in [0, 1]");
      v.require(cfg.get_long("inequalities.fkg_trials", 20) >= 1, "inequalities.fkg_trials must be >= 1");
      const auto& known = check_names();
      for (const auto& c : cfg.get_strings("inequalities.checks"))
        v.require(std::find(known.begin(), known.end(), c) != known.end(), "unknown inequality check '" + c + "'");
    });
    return v.out;
  }

  if (exp == "critical-scaling") {
    v.check([&] {
      const auto sides = cfg.get_longs("critical.sides");
      v.require(sides.size() >= 2, "critical.sides needs at least two lattice sides");
      v.require(strictly_increasing(sides), "critical.sides must be strictly increasing");
      v.require(sides.empty() || sides.front() >= 2, "critical.sides must be >= 2");
      v.require(cfg.get_double("critical.beta", critical_beta::square_lattice()) >= 0.0,
                "critical.beta must be >= 0 for the cluster sampler");
      const auto fg = cfg.get_doubles("critical.field_grid");
      v.require(strictly_increasing(fg), "critical.field_grid must be strictly increasing");
      v.require(fg.empty() || fg.front() >= 0.0, "critical.field_grid must be >= 0 for the cluster sampler");
      v.require(cfg.get_long("critical.sweeps", 4000) >= 100, "critical.sweeps must be >= 100");
      v.require(cfg.get_long("critical.burn_in", 500) >= 0, "critical.burn_in must be >= 0");
      if (cfg.has("graph.kind")) {
        v.require(cfg.get("graph.kind") == "lattice" && cfg.get_long("graph.d", 2) == 2,
                  "critical-scaling runs on 2-D lattices only");
      }
    });
    return v.out;
  }

  if (exp == "estimate") {
    v.check([&] {
      const std::string kind = cfg.get("graph.kind", "lattice");
      v.require(kind == "lattice" || kind == "curie_weiss", "estimate supports graph.kind lattice (d=2) or curie_weiss");
      if (kind == "lattice") v.require(cfg.get_long("graph.d", 2) == 2, "estimate on lattices needs d = 2");
      const auto ns = cfg.get_longs("estimate.n_grid");
      v.require(!ns.empty(), "estimate.n_grid is required");
      v.require(strictly_increasing(ns), "estimate.n_grid must be strictly increasing");
      for (long n : ns) {
        if (kind == "lattice") {
          const auto side = std::llround(std::sqrt(static_cast<double>(n)));
          v.require(n >= 4 && side * side == n, "estimate.n_grid entry " + std::to_string(n) + " is not a square >= 4");
        } else {
          v.require(n >= 2, "estimate.n_grid entries must be >= 2");
        }
      }
      const double beta = cfg.get_double("model.beta", 0.0);
      const double h = cfg.get_double("model.h", 0.0);
      v.require(std::isfinite(beta) && std::isfinite(h), "beta and h must be finite");
      v.require(beta >= 0.0 && beta <= 5.0, "estimate needs 0 <= beta <= 5 (the fitted range)");
      v.require(!cfg.has("model.field"), "estimate uses a uniform field; give model.h");
      v.require(cfg.get("model.boundary", "free") == "free", "estimate uses the free boundary");
      v.require(cfg.get_long("estimate.replicates", 200) >= 1, "estimate.replicates must be >= 1");
      v.require(cfg.get_long("estimate.sweeps", 0) >= 0, "estimate.sweeps must be >= 0");
      const long bs = cfg.get_long("estimate.bound_sweeps", 20000), bb = cfg.get_long("estimate.bound_burn_in", 1000);
      v.require(bs - bb >= 100, "estimate.bound_sweeps - bound_burn_in must be >= 100");
    });
    return v.out;
  }

  // Remaining experiments run on one configured graph.
  std::optional<InteractionGraph> graph;
  v.check([&] { graph.emplace(graph_from_config(cfg)); });
  if (!graph) return v.out;
  const InteractionGraph& g = *graph;
  std::optional<IsingParams> params;
  v.check([&] { params.emplace(params_from_config(cfg, g)); });
  if (!params) return v.out;
  const IsingParams& p = *params;

  if (exp == "exact") {
    const std::size_t nf = free_vertices(g, p.boundary).size();
    v.require(nf <= kMaxFreeSpins, "exact enumeration is capped at " + std::to_string(kMaxFreeSpins) +
                                       " free spins; this system has " + std::to_string(nf));
    const std::string k = cfg.get("exact.kernel", "parallel");
    v.require(k == "parallel" || k == "serial", "exact.kernel must be serial or parallel");
  } else if (exp == "sample") {
    v.check([&] {
      const std::string s = cfg.get("sample.sampler", "auto");
      const long sweeps = cfg.get_long("sample.sweeps", 1000);
      const long thin = cfg.get_long("sample.thin", 1);
      const long burn = cfg.get_long("sample.burn_in", 0);
      v.require(sweeps >= 1 && burn >= 0 && thin >= 1, "sample needs sweeps >= 1, burn_in >= 0, thin >= 1");
      if (s == "cluster") {
        v.require(p.beta >= 0.0, "the cluster sampler needs beta >= 0");
        v.require(cluster_field_ok(p), "the cluster sampler needs a field of the boundary sign");
      } else if (s == "direct") {
        v.require(g.kind() == GraphKind::CurieWeiss, "the direct sampler needs a curie_weiss graph");
        std::set<double> levels(p.mu.begin(), p.mu.end());
        v.require(levels.size() <= 2, "the direct sampler supports at most two field levels");
      } else if (s != "glauber" && s != "auto") {
        v.fail("unknown sampler '" + s + "' (glauber, cluster, direct, auto)");
      }
    });
  } else if (exp == "rc-check") {
    v.require(g.edge_count() <= kMaxRcEdges, "random-cluster enumeration is capped at " + std::to_string(kMaxRcEdges) +
                                                 " edges; this graph has " + std::to_string(g.edge_count()));
    v.require(g.size() <= kMaxFreeSpins, "exact enumeration is capped at " + std::to_string(kMaxFreeSpins) + " free spins");
    v.require(p.beta >= 0.0, "rc-check needs beta >= 0");
    v.require(zero_field(p), "rc-check compares at zero field");
  } else if (exp == "risk-sweep") {
    v.check([&] {
      const long s = cfg.get_long("risk.s", 0);
      v.require(s >= 1 && static_cast<std::size_t>(s) <= g.size(), "risk.s must be in [1, n]");
      const auto grid = cfg.get_doubles("risk.A_grid");
      v.require(!grid.empty(), "risk.A_grid is required");
      v.require(strictly_increasing(grid), "risk.A_grid must be strictly increasing");
      v.require(grid.empty() || grid.front() > 0.0, "risk.A_grid entries must be > 0");
      v.require(cfg.get_long("risk.replicates", 500) >= 1, "risk.replicates must be >= 1");
      for (const auto& pl : cfg.get_strings("risk.placements")) v.check([&] { parse_placement(pl); });
      const std::string rule = cfg.get("risk.value_rule", "exactly");
      v.require(rule == "exactly" || rule == "at_least", "risk.value_rule must be exactly or at_least");
      if (rule == "at_least" && !grid.empty())
        v.require(cfg.get_double("risk.cap", 0.0) >= grid.back(), "risk.cap must be >= the largest A");
      v.require(p.beta >= 0.0, "risk-sweep needs beta >= 0");
      v.require(zero_field(p), "risk-sweep sets the field itself; leave model.h at 0");
      const std::string smp = cfg.get("risk.sampler", "auto");
      v.require(smp == "auto" || smp == "glauber" || smp == "cluster" || smp == "direct",
                "unknown sampler '" + smp + "' (glauber, cluster, direct, auto)");
      if (smp == "direct") v.require(g.kind() == GraphKind::CurieWeiss, "the direct sampler needs a curie_weiss graph");
      if (smp == "cluster")
        v.require(p.boundary != Boundary::Minus, "the cluster sampler cannot carry a positive signal under minus boundary");
      v.require(cfg.get_long("risk.sweeps", 0) >= 0, "risk.sweeps must be >= 0");
      cfg.get_double("risk.cutoff", 0.0);
      cfg.get_double("risk.center", 0.0);
    });
  } else if (exp == "decay") {
    v.require(g.kind() == GraphKind::Lattice, "decay needs a lattice graph");
    v.require(p.boundary != Boundary::Minus, "decay supports free and plus boundaries");
    v.require(p.beta >= 0.0, "decay uses the cluster sampler and needs beta >= 0");
    v.require(zero_field(p), "decay measures the zero-field two-point function");
    v.check([&] {
      v.require(cfg.get_long("decay.replicas", 16) >= 2, "decay.replicas must be >= 2");
      v.require(cfg.get_long("decay.sweeps", 2000) >= 1, "decay.sweeps must be >= 1");
      v.require(cfg.get_long("decay.burn_in", 200) >= 0, "decay.burn_in must be >= 0");
      v.require(cfg.get_long("decay.max_distance", 0) >= 0, "decay.max_distance must be >= 0");
      const double m = cfg.get_double("decay.margin", 0.25);
      v.require(m >= 0.0 && m < 0.5, "decay.margin must be in [0, 0.5)");
    });
  }
  return v.out;
}

}  // namespace spinlab
