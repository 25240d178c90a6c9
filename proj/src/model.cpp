#include "spinlab/model.hpp"

#include <cmath>

#include "spinlab/error.hpp"

namespace spinlab {

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::Free: return "free";
    case Boundary::Plus: return "plus";
    case Boundary::Minus: return "minus";
  }
  return "unknown";
}

Boundary parse_boundary(const std::string& s) {
  if (s == "free") return Boundary::Free;
  if (s == "plus") return Boundary::Plus;
  if (s == "minus") return Boundary::Minus;
  throw ParameterError("unknown boundary '" + s + "' (expected free, plus or minus)");
}

void validate(const InteractionGraph& g, const IsingParams& p) {
  if (!std::isfinite(p.beta)) throw ParameterError("beta must be finite");
  if (p.mu.size() != g.size())
    throw ParameterError("field vector has length " + std::to_string(p.mu.size()) + ", graph has " +
                         std::to_string(g.size()) + " vertices");
  for (double m : p.mu)
    if (std::isnan(m)) throw ParameterError("field contains NaN");
  if (p.boundary != Boundary::Free && g.boundary().empty())
    throw ParameterError(to_string(p.boundary) + " boundary requires a graph with boundary vertices");
}

SpinConfig make_config(const InteractionGraph& g, Boundary b, std::int8_t fill) {
  SpinConfig c;
  c.spins.assign(g.size(), fill);
  c.clamped.assign(g.size(), 0);
  if (b != Boundary::Free) {
    const auto s = static_cast<std::int8_t>(clamp_sign(b));
    for (Vertex v : g.boundary()) {
      c.spins[v] = s;
      c.clamped[v] = 1;
    }
  }
  return c;
}

double log_weight(const InteractionGraph& g, const IsingParams& p, std::span<const std::int8_t> x) {
  double pair = 0.0;
  for (const Edge& e : g.edges()) pair += e.weight * x[e.i] * x[e.j];
  double field = 0.0;
  for (std::size_t v = 0; v < g.size(); ++v) field += p.mu[v] * x[v];
  return p.beta * pair + field;
}

std::vector<Vertex> free_vertices(const InteractionGraph& g, Boundary b) {
  std::vector<Vertex> out;
  out.reserve(g.size());
  for (std::size_t v = 0; v < g.size(); ++v)
    if (b == Boundary::Free || !g.is_boundary(static_cast<Vertex>(v))) out.push_back(static_cast<Vertex>(v));
  return out;
}

}  // namespace spinlab
