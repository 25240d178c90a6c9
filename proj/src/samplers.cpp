#include "spinlab/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinlab/error.hpp"

namespace spinlab {

std::string to_string(UpdateKind u) { return u == UpdateKind::Glauber ? "glauber" : "cluster"; }

UpdateKind parse_update(const std::string& s) {
  if (s == "glauber") return UpdateKind::Glauber;
  if (s == "cluster") return UpdateKind::Cluster;
  throw ParameterError("unknown update '" + s + "' (expected glauber or cluster)");
}

long default_burn_in(UpdateKind u, std::size_t n) {
  return u == UpdateKind::Glauber ? 10 * static_cast<long>(n) : 1000;
}

SpinConfig random_config(const InteractionGraph& g, Boundary b, Rng& rng) {
  SpinConfig c = make_config(g, b, 1);
  for (std::size_t v = 0; v < g.size(); ++v)
    if (!c.clamped[v]) c.spins[v] = coin(rng) ? 1 : -1;
  return c;
}

void glauber_sweep(SpinConfig& state, const InteractionGraph& g, const IsingParams& p, Rng& rng) {
  auto& x = state.spins;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (state.clamped[v]) continue;
    double m = 0.0;
    for (const Neighbor& nb : g.neighbors(static_cast<Vertex>(v))) m += nb.weight * x[nb.vertex];
    const double h = p.beta * m + p.mu[v];
    const double prob_up = 1.0 / (1.0 + std::exp(-2.0 * h));
    x[v] = uniform01(rng) < prob_up ? 1 : -1;
  }
}

ClusterUpdater::ClusterUpdater(const InteractionGraph& g, const IsingParams& p) : g_(&g) {
  validate(g, p);
  if (p.beta < 0.0) throw ParameterError("cluster update requires beta >= 0 (ferromagnetic coupling)");
  ghost_sign_ = p.boundary == Boundary::Minus ? -1 : 1;
  ghost_prob_.assign(g.size(), 0.0);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const double field = ghost_sign_ * p.mu[v];
    if (field < 0.0)
      throw ParameterError(p.boundary == Boundary::Minus
                               ? "cluster update with minus boundary requires mu <= 0"
                               : "cluster update requires mu >= 0");
    ghost_prob_[v] = -std::expm1(-2.0 * field);
  }
  edge_prob_.reserve(g.edge_count());
  for (const Edge& e : g.edges()) edge_prob_.push_back(-std::expm1(-2.0 * p.beta * e.weight));
}

void ClusterUpdater::sweep(SpinConfig& state, Rng& rng, std::vector<std::uint8_t>* bonds) {
  const std::size_t n = g_->size();
  auto& x = state.spins;
  const std::uint32_t ghost_node = ghost();
  uf_.reset(n + 1);
  if (bonds) bonds->assign(g_->edge_count(), 0);

  auto edges = g_->edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (x[e.i] != x[e.j] || edge_prob_[k] == 0.0) continue;
    if (uniform01(rng) < edge_prob_[k]) {
      uf_.unite(static_cast<std::uint32_t>(e.i), static_cast<std::uint32_t>(e.j));
      if (bonds) (*bonds)[k] = 1;
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (state.clamped[v]) {
      uf_.unite(static_cast<std::uint32_t>(v), ghost_node);
    } else if (ghost_prob_[v] > 0.0 && x[v] == ghost_sign_ && uniform01(rng) < ghost_prob_[v]) {
      uf_.unite(static_cast<std::uint32_t>(v), ghost_node);
    }
  }

  root_sign_.assign(n + 1, 0);
  root_sign_[uf_.find(ghost_node)] = ghost_sign_;
  for (std::size_t v = 0; v < n; ++v) {
    const std::uint32_t r = uf_.find(static_cast<std::uint32_t>(v));
    if (root_sign_[r] == 0) root_sign_[r] = coin(rng) ? 1 : -1;
    x[v] = root_sign_[r];
  }
}

void cluster_sweep(SpinConfig& state, const InteractionGraph& g, const IsingParams& p, Rng& rng) {
  ClusterUpdater up(g, p);
  up.sweep(state, rng);
}

void run_chain(const InteractionGraph& g, const IsingParams& p, const ChainSpec& spec,
               const std::function<void(const SpinConfig&)>& on_sample) {
  validate(g, p);
  if (spec.burn_in < 0 || spec.thin < 1 || spec.sweeps < spec.burn_in)
    throw ParameterError("chain spec needs burn_in >= 0, thin >= 1, sweeps >= burn_in");
  Rng rng(spec.seed);
  SpinConfig state = random_config(g, p.boundary, rng);
  if (spec.update == UpdateKind::Cluster) {
    ClusterUpdater up(g, p);
    for (long t = 1; t <= spec.sweeps; ++t) {
      up.sweep(state, rng);
      if (t > spec.burn_in && (t - spec.burn_in) % spec.thin == 0) on_sample(state);
    }
  } else {
    for (long t = 1; t <= spec.sweeps; ++t) {
      glauber_sweep(state, g, p, rng);
      if (t > spec.burn_in && (t - spec.burn_in) % spec.thin == 0) on_sample(state);
    }
  }
}

std::vector<SpinConfig> sample_chain(const InteractionGraph& g, const IsingParams& p, const ChainSpec& spec) {
  std::vector<SpinConfig> out;
  if (spec.thin >= 1 && spec.sweeps >= spec.burn_in)
    out.reserve(static_cast<std::size_t>((spec.sweeps - spec.burn_in) / spec.thin));
  run_chain(g, p, spec, [&](const SpinConfig& c) { out.push_back(c); });
  return out;
}

SpinConfig draw_state(const InteractionGraph& g, const IsingParams& p, UpdateKind update, long sweeps,
                      std::uint64_t seed) {
  SpinConfig last;
  ChainSpec spec{sweeps, sweeps - 1, 1, seed, update};
  if (sweeps < 1) throw ParameterError("draw_state needs at least one sweep");
  run_chain(g, p, spec, [&](const SpinConfig& c) { last = c; });
  return last;
}

namespace {

double log_choose(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

void normalize_log(std::vector<double>& lw) {
  const double mx = *std::max_element(lw.begin(), lw.end());
  double z = 0.0;
  for (double& v : lw) {
    v = std::exp(v - mx);
    z += v;
  }
  for (double& v : lw) v /= z;
}

}  // namespace

std::vector<double> curie_weiss_count_pmf(std::size_t n, double beta, double h) {
  if (n < 1) throw ParameterError("Curie-Weiss needs n >= 1");
  std::vector<double> lw(n + 1);
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const double s = 2.0 * static_cast<double>(k) - nn;
    lw[k] = log_choose(n, k) + beta / (2.0 * nn) * s * s + h * s;
  }
  normalize_log(lw);
  return lw;
}

CurieWeissDirect::CurieWeissDirect(std::size_t n, double beta, const std::vector<double>& mu) : n_(n) {
  if (n < 1 || n > 10'000'000) throw ParameterError("Curie-Weiss direct sampler needs 1 <= n <= 1e7");
  if (mu.size() != n) throw ParameterError("field vector length must equal n");
  std::vector<double> levels;
  for (double m : mu)
    if (std::find(levels.begin(), levels.end(), m) == levels.end()) levels.push_back(m);
  if (levels.size() > 2) throw UnsupportedError("Curie-Weiss direct sampler supports at most two field levels");
  std::sort(levels.begin(), levels.end());
  groups_.resize(levels.size());
  for (std::size_t v = 0; v < n; ++v)
    groups_[levels.size() == 1 || mu[v] == levels[0] ? 0 : 1].push_back(static_cast<Vertex>(v));
  if (levels.size() == 1) {
    levels.push_back(0.0);
    groups_.emplace_back();
  }

  const std::size_t n0 = groups_[0].size();
  const std::size_t n1 = groups_[1].size();
  const double nn = static_cast<double>(n);
  pmf_.resize((n0 + 1) * (n1 + 1));
  for (std::size_t k0 = 0; k0 <= n0; ++k0) {
    const double base = log_choose(n0, k0) + levels[0] * (2.0 * static_cast<double>(k0) - static_cast<double>(n0));
    for (std::size_t k1 = 0; k1 <= n1; ++k1) {
      const double s = 2.0 * static_cast<double>(k0 + k1) - nn;
      pmf_[k0 * (n1 + 1) + k1] = base + log_choose(n1, k1) +
                                 levels[1] * (2.0 * static_cast<double>(k1) - static_cast<double>(n1)) +
                                 beta / (2.0 * nn) * s * s;
    }
  }
  normalize_log(pmf_);
  cdf_.resize(pmf_.size());
  double acc = 0.0;
  for (std::size_t a = 0; a < pmf_.size(); ++a) cdf_[a] = (acc += pmf_[a]);
}

SpinConfig CurieWeissDirect::draw(Rng& rng) const {
  const double u = uniform01(rng) * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t cell = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  const std::size_t n1 = groups_[1].size();
  const std::size_t counts[2] = {cell / (n1 + 1), cell % (n1 + 1)};

  SpinConfig c;
  c.spins.assign(n_, -1);
  c.clamped.assign(n_, 0);
  std::vector<Vertex> pool;
  for (int gi = 0; gi < 2; ++gi) {
    pool = groups_[gi];
    // Partial Fisher-Yates: the first counts[gi] entries become +1.
    for (std::size_t a = 0; a < counts[gi]; ++a) {
      std::uniform_int_distribution<std::size_t> pick(a, pool.size() - 1);
      std::swap(pool[a], pool[pick(rng)]);
      c.spins[pool[a]] = 1;
    }
  }
  return c;
}

SpinConfig curie_weiss_direct(std::size_t n, double beta, double h, std::uint64_t seed) {
  CurieWeissDirect sampler(n, beta, std::vector<double>(n, h));
  Rng rng(seed);
  return sampler.draw(rng);
}

}  // namespace spinlab
