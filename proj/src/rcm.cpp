#include "spinlab/rcm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "spinlab/error.hpp"

namespace spinlab {

std::size_t PercolationConfig::open_count() const {
  return static_cast<std::size_t>(std::count(open.begin(), open.end(), std::uint8_t{1}));
}

BoundaryPartition BoundaryPartition::free(const InteractionGraph& g) {
  BoundaryPartition xi;
  xi.domain_.assign(g.boundary().begin(), g.boundary().end());
  for (Vertex v : xi.domain_) xi.blocks_.push_back({v});
  return xi;
}

BoundaryPartition BoundaryPartition::wired(const InteractionGraph& g) {
  BoundaryPartition xi;
  xi.domain_.assign(g.boundary().begin(), g.boundary().end());
  if (!xi.domain_.empty()) xi.blocks_.push_back(xi.domain_);
  return xi;
}

BoundaryPartition BoundaryPartition::from_blocks(std::span<const Vertex> domain,
                                                 std::vector<std::vector<Vertex>> blocks) {
  BoundaryPartition xi;
  xi.domain_.assign(domain.begin(), domain.end());
  std::sort(xi.domain_.begin(), xi.domain_.end());
  std::vector<Vertex> seen;
  for (auto& b : blocks) {
    if (b.empty()) throw ParameterError("boundary partition: empty block");
    std::sort(b.begin(), b.end());
    seen.insert(seen.end(), b.begin(), b.end());
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw ParameterError("boundary partition: blocks overlap");
  if (seen != xi.domain_) throw ParameterError("boundary partition: blocks must cover the boundary set exactly");
  xi.blocks_ = std::move(blocks);
  return xi;
}

bool BoundaryPartition::refines(const BoundaryPartition& coarse) const {
  if (domain_ != coarse.domain_) return false;
  std::map<Vertex, std::size_t> owner;
  for (std::size_t b = 0; b < coarse.blocks_.size(); ++b)
    for (Vertex v : coarse.blocks_[b]) owner[v] = b;
  for (const auto& block : blocks_)
    for (Vertex v : block)
      if (owner.at(v) != owner.at(block.front())) return false;
  return true;
}

void BoundaryPartition::contract(UnionFind& uf) const {
  for (const auto& block : blocks_)
    for (std::size_t a = 1; a < block.size(); ++a)
      uf.unite(static_cast<std::uint32_t>(block[0]), static_cast<std::uint32_t>(block[a]));
}

Connectivity::Connectivity(const InteractionGraph& g, const PercolationConfig& cfg, const BoundaryPartition& xi)
    : uf_(g.size()), domain_(xi.domain().begin(), xi.domain().end()) {
  if (cfg.size() != g.edge_count()) throw ParameterError("percolation config length must equal edge count");
  xi.contract(uf_);
  auto edges = g.edges();
  for (std::size_t k = 0; k < edges.size(); ++k)
    if (cfg.open[k]) uf_.unite(static_cast<std::uint32_t>(edges[k].i), static_cast<std::uint32_t>(edges[k].j));
}

bool Connectivity::connected_to_boundary(Vertex i) {
  if (in_domain_root_.empty()) {
    in_domain_root_.assign(uf_.size(), 0);
    for (Vertex v : domain_) in_domain_root_[uf_.find(static_cast<std::uint32_t>(v))] = 1;
  }
  return in_domain_root_[uf_.find(static_cast<std::uint32_t>(i))] != 0;
}

bool connected(const InteractionGraph& g, const PercolationConfig& cfg, const BoundaryPartition& xi, Vertex i,
               Vertex j) {
  Connectivity c(g, cfg, xi);
  return c.connected(i, j);
}

std::size_t component_count(const InteractionGraph& g, const PercolationConfig& cfg, const BoundaryPartition& xi) {
  return Connectivity(g, cfg, xi).component_count();
}

namespace {

void check_rc_size(const InteractionGraph& g) {
  if (g.edge_count() > kMaxRcEdges)
    throw SizeError("random-cluster enumeration over " + std::to_string(g.edge_count()) +
                    " edges exceeds the cap of " + std::to_string(kMaxRcEdges));
}

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("bond probability must lie in [0, 1]");
}

// Unnormalized weights and an indicator per configuration, filled in parallel
// and summed in index order.
template <class Event>
double rc_probability(const InteractionGraph& g, std::span<const double> edge_p, double q,
                      const BoundaryPartition& xi, Event&& event) {
  const std::size_t m = g.edge_count();
  const auto count = static_cast<long long>(std::uint64_t{1} << m);
  std::vector<double> weight(count), hit(count);
  auto edges = g.edges();
#pragma omp parallel for schedule(static)
  for (long long s = 0; s < count; ++s) {
    UnionFind uf(g.size());
    xi.contract(uf);
    double w = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      if ((s >> k) & 1) {
        w *= edge_p[k];
        uf.unite(static_cast<std::uint32_t>(edges[k].i), static_cast<std::uint32_t>(edges[k].j));
      } else {
        w *= 1.0 - edge_p[k];
      }
    }
    w *= std::pow(q, static_cast<double>(uf.components()));
    weight[s] = w;
    hit[s] = event(uf) ? w : 0.0;
  }
  double z = 0.0, num = 0.0;
  for (long long s = 0; s < count; ++s) {
    z += weight[s];
    num += hit[s];
  }
  return num / z;
}

}  // namespace

double rc_exact_connectivity(const InteractionGraph& g, double p, const BoundaryPartition& xi, Vertex i, Vertex j) {
  check_rc_size(g);
  check_p(p);
  std::vector<double> ep(g.edge_count(), p);
  return rc_probability(g, ep, 2.0, xi, [i, j](UnionFind& uf) {
    return uf.same(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  });
}

double rc_exact_boundary_connectivity(const InteractionGraph& g, double p, const BoundaryPartition& xi, Vertex i) {
  check_rc_size(g);
  check_p(p);
  std::vector<double> ep(g.edge_count(), p);
  auto dom = xi.domain();
  return rc_probability(g, ep, 2.0, xi, [i, dom](UnionFind& uf) {
    for (Vertex v : dom)
      if (uf.same(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(v))) return true;
    return false;
  });
}

std::vector<double> rc_pmf(const InteractionGraph& g, std::span<const double> edge_p, double q,
                           const BoundaryPartition& xi) {
  check_rc_size(g);
  if (edge_p.size() != g.edge_count()) throw ParameterError("rc_pmf: one probability per edge required");
  const std::size_t m = g.edge_count();
  const std::size_t count = std::size_t{1} << m;
  std::vector<double> pmf(count);
  auto edges = g.edges();
  for (std::size_t s = 0; s < count; ++s) {
    UnionFind uf(g.size());
    xi.contract(uf);
    double w = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      if ((s >> k) & 1) {
        w *= edge_p[k];
        uf.unite(static_cast<std::uint32_t>(edges[k].i), static_cast<std::uint32_t>(edges[k].j));
      } else {
        w *= 1.0 - edge_p[k];
      }
    }
    pmf[s] = w * std::pow(q, static_cast<double>(uf.components()));
  }
  const double z = std::accumulate(pmf.begin(), pmf.end(), 0.0);
  for (double& v : pmf) v /= z;
  return pmf;
}

PercolationConfig es_joint_sample(const InteractionGraph& g, const IsingParams& params, SpinConfig& state, Rng& rng) {
  for (double m : params.mu)
    if (m != 0.0) throw ParameterError("es_joint_sample is defined at zero field");
  ClusterUpdater up(g, params);
  PercolationConfig cfg;
  up.sweep(state, rng, &cfg.open);
  return cfg;
}

MonotonicityReport check_boundary_monotonicity(const InteractionGraph& g, double p, const BoundaryPartition& coarse,
                                               const BoundaryPartition& fine, Vertex i, Vertex j) {
  if (!fine.refines(coarse)) throw ParameterError("boundary monotonicity: partitions are not nested");
  MonotonicityReport r;
  r.fine = rc_exact_connectivity(g, p, fine, i, j);
  r.coarse = rc_exact_connectivity(g, p, coarse, i, j);
  r.holds = r.fine <= r.coarse + 1e-12;
  return r;
}

DomainMarkovReport check_domain_markov(const InteractionGraph& g, std::span<const std::size_t> sub_edges, double p,
                                       const BoundaryPartition& xi, std::span<const std::uint8_t> psi) {
  const std::size_t m = g.edge_count();
  if (m > 12) throw SizeError("domain Markov check limited to 12 edges");
  check_p(p);
  std::vector<std::uint8_t> inside(m, 0);
  for (std::size_t k : sub_edges) {
    if (k >= m) throw ParameterError("subgraph edge index out of range");
    inside[k] = 1;
  }
  std::vector<std::size_t> in_idx, out_idx;
  for (std::size_t k = 0; k < m; ++k) (inside[k] ? in_idx : out_idx).push_back(k);
  if (psi.size() != out_idx.size()) throw ParameterError("psi must give one state per edge outside the subgraph");

  // Left: full measure restricted to configurations agreeing with psi.
  std::vector<double> ep(m, p);
  const auto full = rc_pmf(g, ep, 2.0, xi);
  const std::size_t sub_count = std::size_t{1} << in_idx.size();
  std::vector<double> left(sub_count, 0.0);
  std::size_t psi_mask = 0;
  for (std::size_t a = 0; a < out_idx.size(); ++a)
    if (psi[a]) psi_mask |= std::size_t{1} << out_idx[a];
  for (std::size_t s = 0; s < sub_count; ++s) {
    std::size_t mask = psi_mask;
    for (std::size_t a = 0; a < in_idx.size(); ++a)
      if ((s >> a) & 1) mask |= std::size_t{1} << in_idx[a];
    left[s] = full[mask];
  }
  const double zl = std::accumulate(left.begin(), left.end(), 0.0);
  if (!(zl > 0.0)) throw ParameterError("domain Markov check: psi has probability zero");

  // Right: subgraph measure under the boundary partition induced by psi and xi
  // on the subgraph's vertices.
  auto edges = g.edges();
  std::vector<Edge> sub;
  std::vector<std::uint8_t> in_sub_vertex(g.size(), 0);
  for (std::size_t k : in_idx) {
    sub.push_back(edges[k]);
    in_sub_vertex[edges[k].i] = in_sub_vertex[edges[k].j] = 1;
  }
  UnionFind outside(g.size());
  xi.contract(outside);
  for (std::size_t a = 0; a < out_idx.size(); ++a)
    if (psi[a]) outside.unite(static_cast<std::uint32_t>(edges[out_idx[a]].i),
                              static_cast<std::uint32_t>(edges[out_idx[a]].j));
  std::map<std::uint32_t, std::vector<Vertex>> groups;
  std::vector<Vertex> domain;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!in_sub_vertex[v]) continue;
    domain.push_back(static_cast<Vertex>(v));
    groups[outside.find(static_cast<std::uint32_t>(v))].push_back(static_cast<Vertex>(v));
  }
  std::vector<std::vector<Vertex>> blocks;
  for (auto& [root, members] : groups) blocks.push_back(std::move(members));
  const auto induced = BoundaryPartition::from_blocks(domain, std::move(blocks));

  // Vertices outside the subgraph stay as isolated vertices: a constant factor.
  InteractionGraph h(g.size(), sub);
  std::vector<double> sub_p(h.edge_count(), p);
  auto right_raw = rc_pmf(h, sub_p, 2.0, induced);
  // h sorts its edges the same way g does, so bit a of right_raw follows in_idx order.

  DomainMarkovReport r;
  for (std::size_t s = 0; s < sub_count; ++s) r.total_variation += std::abs(left[s] / zl - right_raw[s]);
  r.total_variation *= 0.5;
  r.holds = r.total_variation <= 1e-10;
  return r;
}

}  // namespace spinlab
