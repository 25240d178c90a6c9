#include "spinlab/props.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "spinlab/error.hpp"
#include "spinlab/exact.hpp"
#include "spinlab/format.hpp"
#include "spinlab/rng.hpp"

namespace spinlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_ferro_field(const IsingParams& p) {
  if (p.beta < 0.0) throw ParameterError("inequality checks need beta >= 0");
  for (double m : p.mu)
    if (m < 0.0) throw ParameterError("inequality checks need a nonnegative field");
  if (p.boundary == Boundary::Minus) throw ParameterError("minus boundary is not covered by this check");
}

double min_cov(const ExactMoments& m) {
  double out = kInf;
  for (double c : m.covs) out = std::min(out, c);
  return out;
}

}  // namespace

double ghs_margin(const InteractionGraph& g, const IsingParams& params) {
  validate(g, params);
  require_ferro_field(params);
  double out = kInf;
  for (double k : third_cumulants(g, params)) out = std::min(out, -k);
  return out;
}

double gks_margin(const InteractionGraph& g, const IsingParams& params) {
  validate(g, params);
  require_ferro_field(params);
  const ExactMoments m = exact_moments(g, params);
  double out = min_cov(m);
  for (double e : m.means) out = std::min(out, e);
  return out;
}

double MonotoneFn::operator()(std::span<const std::int8_t> x) const {
  for (const auto& clause : clauses) {
    bool all = true;
    for (Vertex v : clause) all = all && x[v] > 0;
    if (all) return 1.0;
  }
  return 0.0;
}

MonotoneFn random_monotone(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("monotone function needs at least one coordinate");
  Rng rng(seed);
  MonotoneFn f;
  std::uniform_int_distribution<std::size_t> clauses(1, 3), lits(1, std::min<std::size_t>(3, n));
  std::uniform_int_distribution<Vertex> vert(0, static_cast<Vertex>(n - 1));
  const std::size_t nc = clauses(rng);
  for (std::size_t c = 0; c < nc; ++c) {
    std::vector<Vertex> clause;
    const std::size_t nl = lits(rng);
    while (clause.size() < nl) {
      const Vertex v = vert(rng);
      if (std::find(clause.begin(), clause.end(), v) == clause.end()) clause.push_back(v);
    }
    std::sort(clause.begin(), clause.end());
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

double fkg_margin(const InteractionGraph& g, const IsingParams& params, std::size_t trials, std::uint64_t seed) {
  validate(g, params);
  if (params.beta < 0.0) throw ParameterError("FKG needs beta >= 0");
  double out = kInf;
  for (std::size_t t = 0; t < trials; ++t) {
    const MonotoneFn f = random_monotone(g.size(), derive_seed(seed, 0, t));
    const MonotoneFn h = random_monotone(g.size(), derive_seed(seed, 1, t));
    const auto e = exact_expectations(g, params, 3, [&](std::span<const std::int8_t> x, std::span<double> o) {
      o[0] = f(x);
      o[1] = h(x);
      o[2] = o[0] * o[1];
    });
    out = std::min(out, e[2] - e[0] * e[1]);
  }
  return out;
}

double griffiths2_margin(const InteractionGraph& dominant, const InteractionGraph& dominated, double beta) {
  if (dominant.size() != dominated.size()) throw ParameterError("coupling matrices differ in size");
  if (beta < 0.0) throw ParameterError("Griffiths II needs beta >= 0");
  for (const Edge& e : dominated.edges())
    if (dominant.coupling(e.i, e.j) < e.weight) throw ParameterError("first coupling matrix does not dominate the second");
  const std::size_t n = dominant.size();
  const auto m1 = exact_moments(dominant, IsingParams::zero_field(n, beta, Boundary::Free));
  const auto m2 = exact_moments(dominated, IsingParams::zero_field(n, beta, Boundary::Free));
  double out = kInf;
  for (std::size_t k = 0; k < m1.covs.size(); ++k) out = std::min(out, m1.covs[k] - m2.covs[k]);
  return out;
}

double field_ordering_margin(const InteractionGraph& g, double beta, const std::vector<double>& mu_large,
                             const std::vector<double>& mu_small, Boundary boundary) {
  if (mu_large.size() != g.size() || mu_small.size() != g.size()) throw ParameterError("field length mismatch");
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(mu_large[i] >= mu_small[i] && mu_small[i] >= 0.0)) throw ParameterError("fields are not nested and nonnegative");
  const IsingParams big{beta, mu_large, boundary}, small{beta, mu_small, boundary};
  validate(g, big);
  require_ferro_field(big);
  const auto m1 = exact_moments(g, big);
  const auto m2 = exact_moments(g, small);
  double out = kInf;
  for (std::size_t k = 0; k < m1.covs.size(); ++k) out = std::min(out, m2.covs[k] - m1.covs[k]);
  return out;
}

double mean_bounds_margin(const InteractionGraph& g, const IsingParams& params) {
  validate(g, params);
  require_ferro_field(params);
  if (params.boundary != Boundary::Free) throw UnsupportedError("mean bounds are checked with free boundary only");
  const std::size_t n = g.size();
  const auto m = exact_moments(g, params);
  const auto m0 = exact_moments(g, IsingParams::zero_field(n, params.beta, Boundary::Free));
  double covrow = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += m0.covs[i * n + j];
    covrow = std::max(covrow, row);
  }
  const double big_m = params.mu.empty() ? 0.0 : *std::max_element(params.mu.begin(), params.mu.end());

  double out = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = m.means[i];
    const double mu = params.mu[i];
    out = std::min(out, e);
    if (e <= 0.5)
      out = std::min(out, e - 0.75 * mu);
    else if (big_m > 0.0)
      out = std::min(out, e - mu / (2.0 * big_m));
    out = std::min(out, covrow * big_m + m0.covs[i * n + i] * mu - e);
  }
  return out;
}

RandomSystem random_system(const FamilySpec& spec, std::uint64_t seed, Boundary boundary) {
  if (spec.max_n == 0 || spec.max_n > kMaxFreeSpins) throw ParameterError("family size out of range");
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> size(1, spec.max_n);
  const std::size_t n = size(rng);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (uniform01(rng) < spec.edge_prob)
        edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), 1.0 - uniform01(rng)});
  std::vector<Vertex> bnd;
  if (boundary != Boundary::Free) {
    for (std::size_t v = 0; v < n; ++v)
      if (coin(rng)) bnd.push_back(static_cast<Vertex>(v));
    if (bnd.empty()) bnd.push_back(static_cast<Vertex>(rng() % n));
  }
  GraphInfo info;
  info.kind = GraphKind::Custom;
  InteractionGraph g(n, std::move(edges), info, std::move(bnd));
  IsingParams p;
  p.beta = spec.max_beta * uniform01(rng);
  p.mu.resize(n);
  for (double& m : p.mu) m = spec.max_field * uniform01(rng);
  p.boundary = boundary;
  return {std::move(g), std::move(p)};
}

std::string describe(const InteractionGraph& g, const IsingParams& params) {
  std::ostringstream os;
  os << "n=" << g.size() << " beta=" << format_double(params.beta) << " boundary=" << to_string(params.boundary)
     << " mu=[";
  for (std::size_t i = 0; i < params.mu.size(); ++i) os << (i ? "," : "") << format_double(params.mu[i]);
  os << "] edges=[";
  bool first = true;
  for (const Edge& e : g.edges()) {
    os << (first ? "" : ",") << '(' << e.i << ',' << e.j << ',' << format_double(e.weight) << ')';
    first = false;
  }
  os << "] boundary_vertices=[";
  first = true;
  for (Vertex v : g.boundary()) {
    os << (first ? "" : ",") << v;
    first = false;
  }
  os << ']';
  return os.str();
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"ghs", "gks", "fkg", "griffiths2", "field_ordering", "mean_bounds"};
  return names;
}

namespace {

struct Outcome {
  double margin = kInf;
  std::string detail;
};

Outcome run_one(std::size_t which, const FamilySpec& spec, std::size_t k) {
  const std::uint64_t seed = derive_seed(spec.seed, which, k);
  // Odd-numbered systems use the plus boundary where the inequality covers it.
  const bool plus_ok = which == 0 || which == 1 || which == 2 || which == 4;
  const Boundary b = plus_ok && (k % 2 == 1) ? Boundary::Plus : Boundary::Free;
  auto sys = random_system(spec, seed, b);
  const auto& g = sys.graph;
  auto& p = sys.params;
  Outcome o;
  switch (which) {
    case 0:
      // Half the GHS systems run at zero field, where every cumulant vanishes.
      if (k % 4 < 2) std::fill(p.mu.begin(), p.mu.end(), 0.0);
      o.margin = ghs_margin(g, p);
      o.detail = describe(g, p);
      break;
    case 1:
      o.margin = gks_margin(g, p);
      o.detail = describe(g, p);
      break;
    case 2:
      o.margin = fkg_margin(g, p, spec.fkg_trials, derive_seed(seed, 7));
      o.detail = describe(g, p);
      break;
    case 3: {
      Rng rng(derive_seed(seed, 3));
      std::vector<Edge> weaker;
      for (const Edge& e : g.edges())
        if (coin(rng)) weaker.push_back({e.i, e.j, e.weight * uniform01(rng)});
      const InteractionGraph g2(g.size(), std::move(weaker));
      o.margin = griffiths2_margin(g, g2, p.beta);
      o.detail = describe(g, p) + " dominated=" + describe(g2, p);
      break;
    }
    case 4: {
      Rng rng(derive_seed(seed, 4));
      std::vector<double> small(p.mu.size());
      for (std::size_t i = 0; i < small.size(); ++i) small[i] = p.mu[i] * uniform01(rng);
      o.margin = field_ordering_margin(g, p.beta, p.mu, small, p.boundary);
      IsingParams ps = p;
      ps.mu = small;
      o.detail = describe(g, p) + " smaller_field=" + describe(g, ps);
      break;
    }
    case 5:
      o.margin = mean_bounds_margin(g, p);
      o.detail = describe(g, p);
      break;
    default:
      throw ParameterError("unknown check");
  }
  return o;
}

}  // namespace

CheckReport run_check(const std::string& name, const FamilySpec& spec) {
  const auto& names = check_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ParameterError("unknown inequality check '" + name + "'");
  const auto which = static_cast<std::size_t>(it - names.begin());

  std::vector<Outcome> results(spec.systems);
  const auto count = static_cast<long long>(spec.systems);
#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < count; ++k) results[k] = run_one(which, spec, static_cast<std::size_t>(k));

  CheckReport rep;
  rep.check = name;
  rep.systems = spec.systems;
  rep.worst_margin = kInf;
  for (const auto& r : results) {
    rep.worst_margin = std::min(rep.worst_margin, r.margin);
    if (r.margin >= -kPropTolerance)
      ++rep.passes;
    else if (!rep.counterexample)
      rep.counterexample = r.detail;
  }
  return rep;
}

std::vector<CheckReport> run_all_checks(const FamilySpec& spec) {
  std::vector<CheckReport> out;
  for (const auto& name : check_names()) out.push_back(run_check(name, spec));
  return out;
}

void write_reports_json(std::ostream& out, const std::vector<CheckReport>& reports) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j{{"check", r.check}, {"systems", r.systems}, {"passes", r.passes}, {"worst_margin", r.worst_margin}};
    if (r.counterexample) j["counterexample"] = *r.counterexample;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

}  // namespace spinlab
