#include "spinlab/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include "spinlab/error.hpp"
#include "spinlab/format.hpp"
#include "spinlab/rng.hpp"

namespace spinlab {

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::Lattice: return "lattice";
    case GraphKind::CurieWeiss: return "curie_weiss";
    case GraphKind::ErdosRenyi: return "erdos_renyi";
    case GraphKind::RegularTree: return "regular_tree";
    case GraphKind::Custom: return "custom";
  }
  return "unknown";
}

InteractionGraph::InteractionGraph(std::size_t n, std::vector<Edge> edges, GraphInfo info,
                                   std::vector<Vertex> boundary, std::vector<int> coords)
    : n_(n), info_(info), boundary_(std::move(boundary)), coords_(std::move(coords)) {
  if (n == 0) throw ParameterError("graph must have at least one vertex");
  if (n > kMaxVertices) throw SizeError("vertex count " + std::to_string(n) + " exceeds cap");

  edges_.reserve(edges.size());
  for (Edge e : edges) {
    if (e.i < 0 || e.j < 0 || static_cast<std::size_t>(e.i) >= n || static_cast<std::size_t>(e.j) >= n)
      throw ParameterError("edge endpoint out of range");
    if (e.i == e.j) throw ParameterError("self-coupling not allowed (Q must be hollow)");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
      throw ParameterError("couplings must be finite and nonnegative");
    if (e.weight == 0.0) continue;
    if (e.i > e.j) std::swap(e.i, e.j);
    edges_.push_back(e);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  for (std::size_t k = 1; k < edges_.size(); ++k)
    if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j)
      throw ParameterError("duplicate edge");

  offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.i + 1];
    ++offsets_[e.j + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
  adj_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adj_[fill[e.i]++] = {e.j, e.weight};
    adj_[fill[e.j]++] = {e.i, e.weight};
  }

  if (!boundary_.empty()) {
    on_boundary_.assign(n, 0);
    for (Vertex b : boundary_) {
      if (b < 0 || static_cast<std::size_t>(b) >= n) throw ParameterError("boundary vertex out of range");
      on_boundary_[b] = 1;
    }
    std::sort(boundary_.begin(), boundary_.end());
    boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
  }
  if (!coords_.empty() && coords_.size() != n * static_cast<std::size_t>(info_.dim))
    throw ParameterError("coordinate array has wrong length");
}

double InteractionGraph::coupling(Vertex i, Vertex j) const {
  for (const Neighbor& nb : neighbors(i))
    if (nb.vertex == j) return nb.weight;
  return 0.0;
}

double InteractionGraph::row_sum(Vertex v) const {
  double s = 0.0;
  for (const Neighbor& nb : neighbors(v)) s += nb.weight;
  return s;
}

double InteractionGraph::max_row_sum() const {
  double best = 0.0;
  for (std::size_t v = 0; v < n_; ++v) best = std::max(best, row_sum(static_cast<Vertex>(v)));
  return best;
}

double InteractionGraph::sum_squared_couplings() const {
  double s = 0.0;
  for (const Edge& e : edges_) s += e.weight * e.weight;
  return 2.0 * s;
}

Vertex InteractionGraph::at(std::span<const int> c) const {
  if (info_.kind != GraphKind::Lattice || static_cast<int>(c.size()) != info_.dim)
    throw ParameterError("at(): lattice coordinates required");
  std::size_t idx = 0;
  for (int a = 0; a < info_.dim; ++a) {
    if (c[a] < 0 || c[a] >= info_.side) throw ParameterError("coordinate outside the box");
    idx = idx * static_cast<std::size_t>(info_.side) + static_cast<std::size_t>(c[a]);
  }
  return static_cast<Vertex>(idx);
}

InteractionGraph build_lattice(int d, int side) {
  if (d < 1 || side < 1) throw ParameterError("lattice needs d >= 1 and side >= 1");
  std::size_t n = 1;
  for (int a = 0; a < d; ++a) {
    if (n > kMaxVertices / static_cast<std::size_t>(side))
      throw SizeError("lattice side^d exceeds vertex cap");
    n *= static_cast<std::size_t>(side);
  }

  std::vector<int> coords(n * d);
  std::vector<Vertex> boundary;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(d) * n);
  std::vector<std::size_t> stride(d);
  stride[d - 1] = 1;
  for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * side;

  for (std::size_t v = 0; v < n; ++v) {
    std::size_t rest = v;
    bool on_edge = false;
    for (int a = 0; a < d; ++a) {
      int c = static_cast<int>(rest / stride[a]);
      rest %= stride[a];
      coords[v * d + a] = c;
      if (c == 0 || c == side - 1) on_edge = true;
      if (c + 1 < side)
        edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>(v + stride[a]), 1.0});
    }
    if (on_edge) boundary.push_back(static_cast<Vertex>(v));
  }
  GraphInfo info;
  info.kind = GraphKind::Lattice;
  info.dim = d;
  info.side = side;
  return InteractionGraph(n, std::move(edges), info, std::move(boundary), std::move(coords));
}

InteractionGraph build_curie_weiss(std::size_t n) {
  if (n < 2) throw ParameterError("Curie-Weiss needs n >= 2");
  if (n > kMaxVertices) throw SizeError("vertex count exceeds cap");
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  const double w = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), w});
  GraphInfo info;
  info.kind = GraphKind::CurieWeiss;
  return InteractionGraph(n, std::move(edges), info);
}

InteractionGraph build_erdos_renyi(std::size_t n, double lambda, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw ParameterError("Erdos-Renyi needs lambda > 0");
  if (n < 2 || !(lambda < static_cast<double>(n)))
    throw ParameterError("Erdos-Renyi needs n >= 2 and lambda < n");
  if (n > kMaxVertices) throw SizeError("vertex count exceeds cap");

  const double p = lambda / static_cast<double>(n);
  const double log_q = std::log1p(-p);
  const double w = 1.0 / lambda;
  Rng rng(derive_seed(seed, 0x45524752ULL));
  std::vector<Edge> edges;

  // Geometric skipping over the upper triangle, row by row.
  std::size_t i = 0;
  std::size_t j = 0;  // next candidate column is j+1 after the first skip
  long long pos = -1; // offset of last visited pair inside row i (column = i + 1 + pos)
  while (i + 1 < n) {
    double u = uniform01(rng);
    if (u <= 0.0) u = 0x1.0p-53;
    pos += 1 + static_cast<long long>(std::floor(std::log(u) / log_q));
    while (i + 1 < n && pos >= static_cast<long long>(n - i - 1)) {
      pos -= static_cast<long long>(n - i - 1);
      ++i;
    }
    if (i + 1 >= n) break;
    j = i + 1 + static_cast<std::size_t>(pos);
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), w});
  }
  GraphInfo info;
  info.kind = GraphKind::ErdosRenyi;
  info.lambda = lambda;
  info.seed = seed;
  return InteractionGraph(n, std::move(edges), info);
}

InteractionGraph build_regular_tree(int k, int depth) {
  if (k < 2 || depth < 1) throw ParameterError("regular tree needs k >= 2 and depth >= 1");
  std::size_t n = 1;
  std::size_t level = static_cast<std::size_t>(k);
  for (int l = 1; l <= depth; ++l) {
    n += level;
    if (n > kMaxVertices) throw SizeError("tree size exceeds vertex cap");
    level *= static_cast<std::size_t>(k - 1);
  }
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  const double w = 1.0 / k;
  std::size_t next = 1;
  std::size_t level_begin = 0;
  std::size_t level_end = 1;
  for (int l = 0; l < depth; ++l) {
    for (std::size_t v = level_begin; v < level_end; ++v) {
      int children = (v == 0) ? k : k - 1;
      for (int c = 0; c < children; ++c)
        edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>(next++), w});
    }
    level_begin = level_end;
    level_end = next;
  }
  GraphInfo info;
  info.kind = GraphKind::RegularTree;
  info.arity = k;
  info.depth = depth;
  return InteractionGraph(n, std::move(edges), info);
}

InteractionGraph build_custom(std::size_t n, std::vector<Edge> edges) {
  return InteractionGraph(n, std::move(edges));
}

std::vector<Vertex> isolated_vertices(const InteractionGraph& g) {
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (g.row_sum(static_cast<Vertex>(v)) == 0.0) out.push_back(static_cast<Vertex>(v));
  return out;
}

std::vector<std::size_t> bfs_distances(const InteractionGraph& g, Vertex source) {
  if (source < 0 || static_cast<std::size_t>(source) >= g.size())
    throw ParameterError("vertex out of range");
  std::vector<std::size_t> dist(g.size(), kInfiniteDistance);
  std::queue<Vertex> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop();
    for (const Neighbor& nb : g.neighbors(v)) {
      if (dist[nb.vertex] == kInfiniteDistance) {
        dist[nb.vertex] = dist[v] + 1;
        q.push(nb.vertex);
      }
    }
  }
  return dist;
}

std::size_t graph_distance(const InteractionGraph& g, Vertex i, Vertex j) {
  if (j < 0 || static_cast<std::size_t>(j) >= g.size()) throw ParameterError("vertex out of range");
  if (i == j) return 0;
  return bfs_distances(g, i)[j];
}

namespace {

template <class T>
T parse_number(std::string_view tok, const char* what) {
  T value{};
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ParameterError(std::string("edge list: bad ") + what + " '" + std::string(tok) + "'");
  return value;
}

}  // namespace

InteractionGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line.substr(first));
    if (!have_header) {
      std::string head;
      ls >> head;
      if (head.rfind("n=", 0) != 0) throw ParameterError("edge list: missing 'n=<count>' header");
      n = parse_number<std::size_t>(std::string_view(head).substr(2), "vertex count");
      have_header = true;
      continue;
    }
    std::string a, b, w;
    if (!(ls >> a >> b >> w)) throw ParameterError("edge list: expected 'i j w' on line '" + line + "'");
    edges.push_back({parse_number<Vertex>(a, "vertex"), parse_number<Vertex>(b, "vertex"),
                     parse_number<double>(w, "weight")});
  }
  if (!have_header) throw ParameterError("edge list: empty input");
  return build_custom(n, std::move(edges));
}

void write_edge_list(std::ostream& out, const InteractionGraph& g) {
  out << "n=" << g.size() << '\n';
  for (const Edge& e : g.edges()) out << e.i << ' ' << e.j << ' ' << format_double(e.weight) << '\n';
}

}  // namespace spinlab
