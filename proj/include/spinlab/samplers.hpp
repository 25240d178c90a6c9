#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "spinlab/graph.hpp"
#include "spinlab/model.hpp"
#include "spinlab/rng.hpp"
#include "spinlab/union_find.hpp"

namespace spinlab {

enum class UpdateKind { Glauber, Cluster };

std::string to_string(UpdateKind u);
UpdateKind parse_update(const std::string& s);

struct ChainSpec {
  long sweeps = 0;
  long burn_in = 0;
  long thin = 1;
  std::uint64_t seed = 0;
  UpdateKind update = UpdateKind::Glauber;
};

/// 10·n sweeps for Glauber, 10³ for cluster updates.
long default_burn_in(UpdateKind u, std::size_t n);

/// Uniformly random free spins, boundary clamped.
SpinConfig random_config(const InteractionGraph& g, Boundary b, Rng& rng);

/// One heat-bath pass over unclamped vertices in index order:
/// P(X_v = +1 | rest) = 1 / (1 + exp(-2(β m_v + μ_v))), m_v = Σ_j Q_vj x_j.
void glauber_sweep(SpinConfig& state, const InteractionGraph& g, const IsingParams& p, Rng& rng);

/// Swendsen-Wang update through the Edward-Sokal coupling. The field and a
/// clamped boundary are handled by a ghost vertex (index n) whose spin is the
/// boundary sign; Minus runs the Plus update on the flipped system.
/// Requires β ≥ 0 and a field of the ghost's sign (μ ≥ 0 for Free/Plus,
/// μ ≤ 0 for Minus).
class ClusterUpdater {
 public:
  ClusterUpdater(const InteractionGraph& g, const IsingParams& p);

  /// When `bonds` is non-null it receives one 0/1 entry per graph edge
  /// (ghost bonds excluded).
  void sweep(SpinConfig& state, Rng& rng, std::vector<std::uint8_t>* bonds = nullptr);

  /// Clusters of the last sweep over n + 1 nodes; node n is the ghost.
  UnionFind& clusters() { return uf_; }
  std::uint32_t ghost() const { return static_cast<std::uint32_t>(g_->size()); }

 private:
  const InteractionGraph* g_;
  std::vector<double> edge_prob_;
  std::vector<double> ghost_prob_;
  std::int8_t ghost_sign_;
  UnionFind uf_;
  std::vector<std::int8_t> root_sign_;
};

/// Convenience wrapper constructing a ClusterUpdater for a single sweep.
void cluster_sweep(SpinConfig& state, const InteractionGraph& g, const IsingParams& p, Rng& rng);

/// Drives one chain: random start, `burn_in` discarded sweeps, then every
/// `thin`-th state handed to `on_sample`. Deterministic in spec.seed.
void run_chain(const InteractionGraph& g, const IsingParams& p, const ChainSpec& spec,
               const std::function<void(const SpinConfig&)>& on_sample);

/// ⌊(sweeps − burn_in)/thin⌋ configurations.
std::vector<SpinConfig> sample_chain(const InteractionGraph& g, const IsingParams& p, const ChainSpec& spec);

/// Final state after `sweeps` updates from a seeded random start.
SpinConfig draw_state(const InteractionGraph& g, const IsingParams& p, UpdateKind update, long sweeps,
                      std::uint64_t seed);

/// Exact sampler for the complete graph with Q_ij = 1/n and a field taking at
/// most two values. Draws the +1 counts per field level from their exact joint
/// law, then places the +1 spins uniformly within each level.
class CurieWeissDirect {
 public:
  CurieWeissDirect(std::size_t n, double beta, const std::vector<double>& mu);

  SpinConfig draw(Rng& rng) const;
  /// Joint pmf over (k_0, k_1), row-major (k_0 outer).
  const std::vector<double>& pmf() const { return pmf_; }

 private:
  std::size_t n_;
  std::vector<std::vector<Vertex>> groups_;
  std::vector<double> cdf_;
  std::vector<double> pmf_;
};

/// Exact law of the number of +1 spins, k = 0..n, under a uniform field h.
std::vector<double> curie_weiss_count_pmf(std::size_t n, double beta, double h);

SpinConfig curie_weiss_direct(std::size_t n, double beta, double h, std::uint64_t seed);

}  // namespace spinlab
