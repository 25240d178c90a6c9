#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace spinlab {

using Vertex = std::int32_t;

/// Hard cap on vertices for every builder.
inline constexpr std::size_t kMaxVertices = std::size_t{1} << 24;

/// Returned by graph_distance for disconnected pairs.
inline constexpr std::size_t kInfiniteDistance = std::numeric_limits<std::size_t>::max();

struct Edge {
  Vertex i;
  Vertex j;
  double weight;
};

struct Neighbor {
  Vertex vertex;
  double weight;
};

enum class GraphKind { Lattice, CurieWeiss, ErdosRenyi, RegularTree, Custom };

/// Construction parameters retained for reporting and for kind-specific
/// fast paths (e.g. the direct Curie-Weiss sampler).
struct GraphInfo {
  GraphKind kind = GraphKind::Custom;
  int dim = 0;               // Lattice
  int side = 0;              // Lattice
  double lambda = 0.0;       // ErdosRenyi
  std::uint64_t seed = 0;    // ErdosRenyi
  int arity = 0;             // RegularTree (k)
  int depth = 0;             // RegularTree
};

std::string to_string(GraphKind kind);

/// Ferromagnetic interaction graph: symmetric, hollow, nonnegative coupling
/// matrix Q stored as an undirected edge list plus CSR adjacency. Immutable
/// after construction.
class InteractionGraph {
 public:
  /// Validates and builds from an undirected edge list (each pair at most once,
  /// i != j, weight > 0). Zero-weight edges are dropped.
  InteractionGraph(std::size_t n, std::vector<Edge> edges, GraphInfo info = {},
                   std::vector<Vertex> boundary = {}, std::vector<int> coords = {});

  std::size_t size() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Neighbor> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  /// Q_ij; 0 when no edge. O(deg).
  double coupling(Vertex i, Vertex j) const;
  double row_sum(Vertex v) const;
  /// ‖Q‖_{∞→∞}: max absolute row sum.
  double max_row_sum() const;
  /// Σ_{i,j} Q_ij² over ordered pairs.
  double sum_squared_couplings() const;

  const GraphInfo& info() const { return info_; }
  GraphKind kind() const { return info_.kind; }

  std::span<const Vertex> boundary() const { return boundary_; }
  bool is_boundary(Vertex v) const { return on_boundary_.empty() ? false : on_boundary_[v] != 0; }

  bool has_coords() const { return !coords_.empty(); }
  int dim() const { return info_.dim; }
  std::span<const int> coords(Vertex v) const {
    return {coords_.data() + static_cast<std::size_t>(v) * info_.dim, static_cast<std::size_t>(info_.dim)};
  }
  /// Lattice only: vertex at the given coordinates.
  Vertex at(std::span<const int> c) const;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adj_;
  GraphInfo info_;
  std::vector<Vertex> boundary_;
  std::vector<std::uint8_t> on_boundary_;
  std::vector<int> coords_;
};

/// d-dimensional box of side^d vertices, lexicographic coordinates, unit
/// nearest-neighbour couplings; boundary = vertices with a coordinate at 0 or side-1.
InteractionGraph build_lattice(int d, int side);

/// Complete graph with Q_ij = 1/n.
InteractionGraph build_curie_weiss(std::size_t n);

/// G(n, λ/n) with present edges weighted 1/λ. Pure function of seed.
InteractionGraph build_erdos_renyi(std::size_t n, double lambda, std::uint64_t seed);

/// Rooted tree: root has k children, every other internal vertex k-1.
/// Couplings 1/k. Vertices in BFS order, root = 0.
InteractionGraph build_regular_tree(int k, int depth);

InteractionGraph build_custom(std::size_t n, std::vector<Edge> edges);

/// Vertices with zero row sum.
std::vector<Vertex> isolated_vertices(const InteractionGraph& g);

/// Hop distance; kInfiniteDistance when disconnected.
std::size_t graph_distance(const InteractionGraph& g, Vertex i, Vertex j);

/// All hop distances from `source` (kInfiniteDistance where unreachable).
std::vector<std::size_t> bfs_distances(const InteractionGraph& g, Vertex source);

/// Edge-list text: header "n=<count>", then one "i j w" line per edge.
InteractionGraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const InteractionGraph& g);

}  // namespace spinlab
