#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spinlab/graph.hpp"

namespace spinlab {

enum class Boundary { Free, Plus, Minus };

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& s);

/// P(x) ∝ exp((β/2) xᵀQx + μᵀx), optionally with boundary spins clamped.
struct IsingParams {
  double beta = 0.0;
  std::vector<double> mu;
  Boundary boundary = Boundary::Free;

  static IsingParams zero_field(std::size_t n, double beta, Boundary b = Boundary::Free) {
    return {beta, std::vector<double>(n, 0.0), b};
  }
  static IsingParams uniform_field(std::size_t n, double beta, double h, Boundary b = Boundary::Free) {
    return {beta, std::vector<double>(n, h), b};
  }
};

/// Throws ParameterError if μ has the wrong length, β is not finite, or a
/// Plus/Minus boundary is requested on a graph without boundary vertices.
void validate(const InteractionGraph& g, const IsingParams& p);

/// Sign the boundary clamps to: +1, -1, or 0 for Free.
inline int clamp_sign(Boundary b) { return b == Boundary::Plus ? 1 : (b == Boundary::Minus ? -1 : 0); }

struct SpinConfig {
  std::vector<std::int8_t> spins;
  std::vector<std::uint8_t> clamped;

  std::size_t size() const { return spins.size(); }
  long long magnetization() const {
    long long s = 0;
    for (auto x : spins) s += x;
    return s;
  }
};

/// Configuration with boundary spins clamped per params.boundary and every
/// other spin set to `fill` (+1 or -1).
SpinConfig make_config(const InteractionGraph& g, Boundary b, std::int8_t fill = 1);

/// (β/2) xᵀQx + μᵀx for the full configuration, clamped spins included.
double log_weight(const InteractionGraph& g, const IsingParams& p, std::span<const std::int8_t> x);

/// Unclamped vertices in increasing order.
std::vector<Vertex> free_vertices(const InteractionGraph& g, Boundary b);

}  // namespace spinlab
