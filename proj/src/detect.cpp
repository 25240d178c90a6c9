#include "spinlab/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "spinlab/error.hpp"
#include "spinlab/exact.hpp"
#include "spinlab/format.hpp"

namespace spinlab {

double threshold_multiplier(std::size_t n, std::size_t s, double A) {
  if (!(A > 0.0)) throw ParameterError("threshold: signal strength A must be positive");
  if (s == 0 || n == 0) throw ParameterError("threshold: need n >= 1 and s >= 1");
  return std::sqrt(static_cast<double>(s) * std::tanh(A) / std::sqrt(static_cast<double>(n)));
}

double threshold(std::size_t n, std::size_t s, double A) {
  return threshold_multiplier(n, s, A) * std::sqrt(static_cast<double>(n));
}

int run_test(const SpinConfig& x, double cutoff, double center) {
  return run_test_sum(static_cast<double>(x.magnetization()), cutoff, center);
}

std::string to_string(Placement p) {
  switch (p) {
    case Placement::RandomUniform: return "random_uniform";
    case Placement::IsolatedFirst: return "isolated_first";
    case Placement::ClusteredBall: return "clustered_ball";
    case Placement::Spread: return "spread";
  }
  return "unknown";
}

Placement parse_placement(const std::string& s) {
  if (s == "random_uniform") return Placement::RandomUniform;
  if (s == "isolated_first") return Placement::IsolatedFirst;
  if (s == "clustered_ball") return Placement::ClusteredBall;
  if (s == "spread") return Placement::Spread;
  throw ParameterError("unknown placement '" + s + "'");
}

namespace {

void check_class(const InteractionGraph& g, const SignalClass& cls) {
  if (cls.s < 1 || cls.s > g.size()) throw ParameterError("signal class needs 1 <= s <= n");
  if (!(cls.A > 0.0)) throw ParameterError("signal class needs A > 0");
  if (cls.value_rule == ValueRule::AtLeastA && !(cls.cap >= cls.A))
    throw ParameterError("AtLeastA needs a cap M >= A");
}

// Moves a uniform random `k`-subset of `pool` to its front.
void partial_shuffle(std::vector<Vertex>& pool, std::size_t k, Rng& rng) {
  for (std::size_t a = 0; a < k && a < pool.size(); ++a) {
    std::uniform_int_distribution<std::size_t> pick(a, pool.size() - 1);
    std::swap(pool[a], pool[pick(rng)]);
  }
}

}  // namespace

PlacedSignal place_signal(const InteractionGraph& g, const SignalClass& cls, std::uint64_t seed) {
  check_class(g, cls);
  const std::size_t n = g.size();
  const std::size_t s = cls.s;
  Rng rng(seed);
  PlacedSignal out;

  switch (cls.placement) {
    case Placement::RandomUniform: {
      std::vector<Vertex> pool(n);
      std::iota(pool.begin(), pool.end(), Vertex{0});
      partial_shuffle(pool, s, rng);
      out.support.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s));
      break;
    }
    case Placement::IsolatedFirst: {
      auto iso = isolated_vertices(g);
      partial_shuffle(iso, iso.size(), rng);
      const std::size_t take = std::min(s, iso.size());
      out.support.assign(iso.begin(), iso.begin() + static_cast<std::ptrdiff_t>(take));
      if (take < s) {
        out.fell_back = true;
        std::vector<Vertex> rest;
        for (std::size_t v = 0; v < n; ++v)
          if (g.degree(static_cast<Vertex>(v)) != 0) rest.push_back(static_cast<Vertex>(v));
        partial_shuffle(rest, s - take, rng);
        out.support.insert(out.support.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(s - take));
      }
      break;
    }
    case Placement::ClusteredBall: {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      const auto centre = static_cast<Vertex>(pick(rng));
      const auto dist = bfs_distances(g, centre);
      std::vector<Vertex> order(n);
      std::iota(order.begin(), order.end(), Vertex{0});
      std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return dist[a] < dist[b]; });
      out.support.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(s));
      break;
    }
    case Placement::Spread: {
      for (std::size_t k = 0; k < s; ++k) out.support.push_back(static_cast<Vertex>(k * n / s));
      break;
    }
  }

  out.mu.assign(n, 0.0);
  for (Vertex v : out.support)
    out.mu[v] = cls.value_rule == ValueRule::ExactlyA ? cls.A : cls.A + (cls.cap - cls.A) * uniform01(rng);
  std::sort(out.support.begin(), out.support.end());
  return out;
}

namespace {

bool cluster_eligible(const IsingParams& p) {
  if (p.beta < 0.0) return false;
  const double sign = p.boundary == Boundary::Minus ? -1.0 : 1.0;
  return std::all_of(p.mu.begin(), p.mu.end(), [sign](double m) { return sign * m >= 0.0; });
}

bool two_levels(const std::vector<double>& mu) {
  std::vector<double> levels;
  for (double m : mu) {
    if (std::find(levels.begin(), levels.end(), m) == levels.end()) levels.push_back(m);
    if (levels.size() > 2) return false;
  }
  return true;
}

}  // namespace

std::vector<double> sample_sums(const InteractionGraph& g, const IsingParams& params, std::size_t replicates,
                                std::uint64_t seed, SamplerChoice sampler, long sweeps) {
  validate(g, params);
  if (sampler == SamplerChoice::Auto) {
    if (params.beta == 0.0) {
      sampler = SamplerChoice::Glauber;
      sweeps = 1;  // heat-bath resampling is exact for independent spins
    } else if (g.kind() == GraphKind::CurieWeiss && params.boundary == Boundary::Free && two_levels(params.mu)) {
      sampler = SamplerChoice::CurieWeissDirect;
    } else if (cluster_eligible(params)) {
      sampler = SamplerChoice::Cluster;
    } else {
      sampler = SamplerChoice::Glauber;
    }
  }
  std::vector<double> sums(replicates);
  const auto count = static_cast<long long>(replicates);

  if (sampler == SamplerChoice::CurieWeissDirect) {
    if (g.kind() != GraphKind::CurieWeiss || params.boundary != Boundary::Free)
      throw ParameterError("direct sampler needs a Curie-Weiss graph with free boundary");
    const CurieWeissDirect cw(g.size(), params.beta, params.mu);
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < count; ++r) {
      Rng rng(derive_seed(seed, 0, static_cast<std::uint64_t>(r)));
      sums[r] = static_cast<double>(cw.draw(rng).magnetization());
    }
    return sums;
  }

  const UpdateKind kind = sampler == SamplerChoice::Cluster ? UpdateKind::Cluster : UpdateKind::Glauber;
  if (sweeps <= 0) sweeps = default_burn_in(kind, g.size());
  if (kind == UpdateKind::Cluster) {
    ClusterUpdater check(g, params);  // throw parameter errors outside the parallel region
  }
#pragma omp parallel for schedule(dynamic)
  for (long long r = 0; r < count; ++r)
    sums[r] = static_cast<double>(
        draw_state(g, params, kind, sweeps, derive_seed(seed, 0, static_cast<std::uint64_t>(r))).magnetization());
  return sums;
}

stats::MeanSe null_center(const InteractionGraph& g, double beta, Boundary boundary, std::size_t replicates,
                          std::uint64_t seed, SamplerChoice sampler, long sweeps) {
  if (boundary == Boundary::Free) return {0.0, 0.0};
  const IsingParams null = IsingParams::zero_field(g.size(), beta, boundary);
  if (free_vertices(g, boundary).size() <= kMaxFreeSpins) {
    const auto m = exact_moments(g, null);
    return {std::accumulate(m.means.begin(), m.means.end(), 0.0), 0.0};
  }
  const auto sums = sample_sums(g, null, replicates, seed, sampler, sweeps);
  return stats::mean_se(sums);
}

namespace {

double rejection_rate(const std::vector<double>& sums, double cutoff, double center) {
  std::size_t hits = 0;
  for (double s : sums) hits += static_cast<std::size_t>(run_test_sum(s, cutoff, center));
  return static_cast<double>(hits) / static_cast<double>(sums.size());
}

// Half the change in a rate when the centre moves by ±se.
double center_spread(const std::vector<double>& sums, double cutoff, const stats::MeanSe& c) {
  if (c.se == 0.0) return 0.0;
  return 0.5 * std::abs(rejection_rate(sums, cutoff, c.mean - c.se) - rejection_rate(sums, cutoff, c.mean + c.se));
}

struct NullDraws {
  std::vector<double> sums;
  stats::MeanSe center;
};

NullDraws draw_null(const InteractionGraph& g, double beta, const RiskSpec& spec, std::size_t replicates,
                    std::uint64_t seed) {
  NullDraws nd;
  if (spec.center) {
    nd.center = {*spec.center, 0.0};
  } else {
    nd.center = null_center(g, beta, spec.boundary, 4 * replicates, derive_seed(seed, 1), spec.sampler, spec.sweeps);
  }
  nd.sums = sample_sums(g, IsingParams::zero_field(g.size(), beta, spec.boundary), replicates, derive_seed(seed, 2),
                        spec.sampler, spec.sweeps);
  return nd;
}

RiskRow risk_against_null(const InteractionGraph& g, double beta, const SignalClass& cls, const RiskSpec& spec,
                          std::size_t replicates, std::uint64_t seed, const NullDraws& null) {
  check_class(g, cls);
  RiskRow row;
  row.s = cls.s;
  row.A = cls.A;
  row.replicates = replicates;
  row.cutoff = spec.cutoff ? *spec.cutoff : threshold(g.size(), cls.s, cls.A);
  row.center = null.center.mean;

  row.type_I = rejection_rate(null.sums, row.cutoff, row.center);
  row.se_type_I = std::hypot(stats::proportion(static_cast<std::size_t>(std::llround(row.type_I * replicates)),
                                               replicates).se,
                             center_spread(null.sums, row.cutoff, null.center));

  std::vector<Placement> adversaries = spec.adversaries;
  if (adversaries.empty()) adversaries.push_back(cls.placement);
  row.worst_type_II = -1.0;
  for (std::size_t k = 0; k < adversaries.size(); ++k) {
    SignalClass c = cls;
    c.placement = adversaries[k];
    const auto placed = place_signal(g, c, derive_seed(seed, 100 + k));
    const IsingParams alt{beta, placed.mu, spec.boundary};
    const auto sums = sample_sums(g, alt, replicates, derive_seed(seed, 200 + k), spec.sampler, spec.sweeps);
    const double type_II = 1.0 - rejection_rate(sums, row.cutoff, row.center);
    if (type_II > row.worst_type_II) {
      row.worst_type_II = type_II;
      row.worst_placement = adversaries[k];
      row.se_type_II = std::hypot(stats::proportion(static_cast<std::size_t>(std::llround(type_II * replicates)),
                                                    replicates).se,
                                  center_spread(sums, row.cutoff, null.center));
    }
  }
  row.risk = row.type_I + row.worst_type_II;
  row.se = std::hypot(row.se_type_I, row.se_type_II);
  return row;
}

}  // namespace

RiskRow estimate_risk(const InteractionGraph& g, double beta, const SignalClass& cls, const RiskSpec& spec,
                      std::size_t replicates, std::uint64_t seed) {
  check_class(g, cls);
  if (replicates == 0) throw ParameterError("estimate_risk needs at least one replicate");
  const NullDraws null = draw_null(g, beta, spec, replicates, seed);
  return risk_against_null(g, beta, cls, spec, replicates, seed, null);
}

RiskCurve detection_sweep(const InteractionGraph& g, double beta, std::size_t s, const std::vector<double>& A_grid,
                          std::size_t replicates, std::uint64_t seed, const RiskSpec& spec, const SignalClass& shape) {
  if (replicates == 0) throw ParameterError("detection_sweep needs at least one replicate");
  const NullDraws null = draw_null(g, beta, spec, replicates, seed);
  RiskCurve curve;
  for (std::size_t a = 0; a < A_grid.size(); ++a) {
    SignalClass cls = shape;
    cls.s = s;
    cls.A = A_grid[a];
    curve.push_back(risk_against_null(g, beta, cls, spec, replicates, derive_seed(seed, 1000 + a), null));
  }
  return curve;
}

void write_risk_csv(std::ostream& out, const RiskCurve& curve) {
  out << "s,A,type_I,worst_type_II,risk,replicates,se\n";
  for (const RiskRow& r : curve)
    out << r.s << ',' << format_double(r.A) << ',' << format_double(r.type_I) << ','
        << format_double(r.worst_type_II) << ',' << format_double(r.risk) << ',' << r.replicates << ','
        << format_double(r.se) << '\n';
}

ConditionDReport condition_d_report(const InteractionGraph& g, double beta, Boundary boundary, const McOptions& mc) {
  ConditionDReport r;
  r.constants = condition_d_constants(g, IsingParams::zero_field(g.size(), beta, boundary), mc);
  r.n = g.size();
  r.variance_bound = r.constants.covrow * static_cast<double>(g.size());
  return r;
}

namespace critical_beta {

double erdos_renyi(double lambda) {
  if (!(lambda > 0.5)) throw ParameterError("Erdos-Renyi critical point needs lambda > 1/2");
  return std::atanh(1.0 / (2.0 * lambda));
}

double regular_tree(int k) {
  if (k < 3) throw ParameterError("(k-1)·tanh(beta/k) = 1 has a root only for k >= 3");
  return k * std::atanh(1.0 / (k - 1));
}

double square_lattice() {
  // Self-dual point sinh(2β) = 1.
  return 0.5 * std::asinh(1.0);
}

}  // namespace critical_beta

namespace {

double cluster_square_sum(UnionFind& uf, std::size_t n, std::vector<std::uint8_t>& seen) {
  seen.assign(n + 1, 0);
  double sq = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    const std::uint32_t r = uf.find(static_cast<std::uint32_t>(v));
    if (!seen[r]) {
      seen[r] = 1;
      const double c = uf.component_size(r);
      sq += c * c;
    }
  }
  return sq;
}

}  // namespace

CriticalScalingResult critical_scaling_experiment(const CriticalScalingSpec& spec) {
  if (spec.d != 2) throw UnsupportedError("critical scaling experiment supports d = 2 only");
  if (spec.sides.size() < 2) throw ParameterError("critical scaling needs at least two sides");
  if (spec.sweeps < 100 || spec.burn_in < 0) throw ParameterError("critical scaling needs sweeps >= 100");
  for (double h : spec.field_grid)
    if (h < 0.0) throw ParameterError("field grid must be nonnegative");

  CriticalScalingResult out;
  out.beta = spec.beta;
  out.sizes.resize(spec.sides.size());
  const int largest = *std::max_element(spec.sides.begin(), spec.sides.end());
  out.field.resize(spec.field_grid.size());
  const auto tasks = static_cast<long long>(spec.sides.size() + spec.field_grid.size());

#pragma omp parallel for schedule(dynamic)
  for (long long t = 0; t < tasks; ++t) {
    const bool size_task = t < static_cast<long long>(spec.sides.size());
    const int side = size_task ? spec.sides[t] : largest;
    const double h = size_task ? 0.0 : spec.field_grid[t - spec.sides.size()];
    const auto g = build_lattice(2, side);
    const auto params = IsingParams::uniform_field(g.size(), spec.beta, h);
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(t)));
    SpinConfig state = random_config(g, Boundary::Free, rng);
    ClusterUpdater up(g, params);
    std::vector<double> series;
    series.reserve(static_cast<std::size_t>(spec.sweeps));
    std::vector<std::uint8_t> seen;
    for (long k = 0; k < spec.burn_in + spec.sweeps; ++k) {
      up.sweep(state, rng);
      if (k < spec.burn_in) continue;
      series.push_back(size_task ? cluster_square_sum(up.clusters(), g.size(), seen)
                                 : static_cast<double>(state.magnetization()));
    }
    const auto est = stats::batch_means(series, 50);
    if (size_task) {
      out.sizes[t] = {side, g.size(), est.mean, est.se};
    } else {
      out.field[t - spec.sides.size()] = {side, h, est.mean, est.se};
    }
  }

  std::vector<double> lx, ly;
  for (const auto& r : out.sizes) {
    lx.push_back(std::log(static_cast<double>(r.side)));
    ly.push_back(std::log(r.second_moment));
  }
  const auto fit = stats::linear_fit(lx, ly);
  out.alpha_side = fit.slope;
  out.alpha_side_se = fit.slope_se;
  out.alpha_volume = fit.slope / spec.d;
  return out;
}

void write_critical_csv(std::ostream& out, const CriticalScalingResult& r) {
  out << "# beta=" << format_double(r.beta) << '\n'
      << "# alpha_side=" << format_double(r.alpha_side) << " (E[S^2] ~ L^alpha, L = side)\n"
      << "# alpha_volume=" << format_double(r.alpha_volume) << " (E[S^2] ~ n^alpha, n = L^2)\n"
      << "kind,side,n,h,value,se\n";
  for (const auto& s : r.sizes)
    out << "second_moment," << s.side << ',' << s.n << ",0," << format_double(s.second_moment) << ','
        << format_double(s.se) << '\n';
  for (const auto& f : r.field)
    out << "mean_sum," << f.side << ',' << static_cast<std::size_t>(f.side) * f.side << ','
        << format_double(f.h) << ',' << format_double(f.mean_sum) << ',' << format_double(f.se) << '\n';
}

}  // namespace spinlab
