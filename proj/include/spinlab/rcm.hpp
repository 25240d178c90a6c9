#pragma once

// FK random-cluster representation at q = 2.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spinlab/graph.hpp"
#include "spinlab/model.hpp"
#include "spinlab/rng.hpp"
#include "spinlab/samplers.hpp"
#include "spinlab/union_find.hpp"

namespace spinlab {

inline constexpr std::size_t kMaxRcEdges = 16;

/// p = 1 - exp(-2β) and its inverse β = -log(1 - p)/2.
inline double es_bond_probability(double beta) { return -std::expm1(-2.0 * beta); }
inline double es_beta(double p) { return -0.5 * std::log1p(-p); }

struct PercolationConfig {
  std::vector<std::uint8_t> open;  // one entry per host-graph edge

  std::size_t size() const { return open.size(); }
  std::size_t open_count() const;
  static PercolationConfig closed(const InteractionGraph& g) { return {std::vector<std::uint8_t>(g.edge_count(), 0)}; }
  static PercolationConfig full(const InteractionGraph& g) { return {std::vector<std::uint8_t>(g.edge_count(), 1)}; }
};

/// Partition of a vertex set (normally the host's boundary) into disjoint
/// blocks; each block is contracted to a single vertex when counting clusters.
class BoundaryPartition {
 public:
  /// All singletons over g.boundary().
  static BoundaryPartition free(const InteractionGraph& g);
  /// One block holding all of g.boundary().
  static BoundaryPartition wired(const InteractionGraph& g);
  /// Validates that blocks are nonempty, disjoint and cover `domain` exactly.
  static BoundaryPartition from_blocks(std::span<const Vertex> domain, std::vector<std::vector<Vertex>> blocks);

  const std::vector<std::vector<Vertex>>& blocks() const { return blocks_; }
  std::span<const Vertex> domain() const { return domain_; }
  /// True when every block of *this lies inside one block of `coarse`.
  bool refines(const BoundaryPartition& coarse) const;
  void contract(UnionFind& uf) const;

 private:
  std::vector<Vertex> domain_;
  std::vector<std::vector<Vertex>> blocks_;
};

/// Cluster structure of one configuration under a boundary partition.
class Connectivity {
 public:
  Connectivity(const InteractionGraph& g, const PercolationConfig& cfg, const BoundaryPartition& xi);

  bool connected(Vertex i, Vertex j) { return uf_.same(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)); }
  /// i joined to some vertex of the partition's domain.
  bool connected_to_boundary(Vertex i);
  std::size_t component_count() const { return uf_.components(); }
  std::uint32_t cluster_size(Vertex i) { return uf_.component_size(static_cast<std::uint32_t>(i)); }

 private:
  UnionFind uf_;
  std::vector<std::uint8_t> in_domain_root_;
  std::vector<Vertex> domain_;
};

bool connected(const InteractionGraph& g, const PercolationConfig& cfg, const BoundaryPartition& xi, Vertex i, Vertex j);
std::size_t component_count(const InteractionGraph& g, const PercolationConfig& cfg, const BoundaryPartition& xi);

/// φ^ξ_{p,2}(i ↔ j) by enumeration of all 2^|E| bond configurations.
/// Throws SizeError when |E| > kMaxRcEdges.
double rc_exact_connectivity(const InteractionGraph& g, double p, const BoundaryPartition& xi, Vertex i, Vertex j);

/// φ^ξ_{p,2}(i ↔ domain of ξ).
double rc_exact_boundary_connectivity(const InteractionGraph& g, double p, const BoundaryPartition& xi, Vertex i);

/// Normalized random-cluster pmf over all 2^|E| configurations (bit k of the
/// index = edge k open), with per-edge probabilities and general q.
std::vector<double> rc_pmf(const InteractionGraph& g, std::span<const double> edge_p, double q,
                           const BoundaryPartition& xi);

/// One Swendsen-Wang step at μ = 0 returning the bond layer alongside the
/// updated spins. Bond marginal is φ^ξ with p = 1 - e^{-2β Q_e}; ξ is wired
/// under Plus/Minus, free otherwise.
PercolationConfig es_joint_sample(const InteractionGraph& g, const IsingParams& params, SpinConfig& state, Rng& rng);

struct MonotonicityReport {
  double fine = 0.0;
  double coarse = 0.0;
  bool holds = false;
};

/// φ^{fine}(i↔j) ≤ φ^{coarse}(i↔j), exact.
MonotonicityReport check_boundary_monotonicity(const InteractionGraph& g, double p, const BoundaryPartition& coarse,
                                               const BoundaryPartition& fine, Vertex i, Vertex j);

struct DomainMarkovReport {
  double total_variation = 0.0;
  bool holds = false;
};

/// Conditioning φ^ξ_H on the bonds ψ outside `sub_edges` equals the
/// random-cluster measure on the subgraph with the ψ-induced boundary
/// partition. `psi` lists states of the complement edges in increasing edge
/// index order. Requires |E| ≤ 12.
DomainMarkovReport check_domain_markov(const InteractionGraph& g, std::span<const std::size_t> sub_edges, double p,
                                       const BoundaryPartition& xi, std::span<const std::uint8_t> psi);

}  // namespace spinlab
