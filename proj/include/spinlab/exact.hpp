#pragma once

// Brute-force enumeration over the free spins of a small Ising system. Ground
// truth for every statistical check in the project.
//
// Two kernels visit the same 2^m states:
//   Serial   - plain loop, each state's log-weight computed from scratch.
//   Parallel - fixed-size chunks walked in Gray-code order with O(deg)
//              incremental updates, chunks spread over OpenMP threads and
//              merged in chunk order, so results do not depend on the
//              thread count.
// Both make two passes: the first finds the maximal log-weight, the second
// accumulates exp(logw - max).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "spinlab/graph.hpp"
#include "spinlab/model.hpp"

namespace spinlab {

inline constexpr std::size_t kMaxFreeSpins = 24;

enum class Kernel { Serial, Parallel };

/// Precomputed view of the enumerable part of a system.
class StateSpace {
 public:
  /// Throws SizeError beyond kMaxFreeSpins, ParameterError on invalid params.
  StateSpace(const InteractionGraph& g, const IsingParams& p);

  const InteractionGraph& graph() const { return *g_; }
  const IsingParams& params() const { return *p_; }
  std::span<const Vertex> free() const { return free_; }
  std::uint64_t state_count() const { return std::uint64_t{1} << free_.size(); }

  /// Writes the configuration for `state` (bit b → free vertex b is +1).
  void decode(std::uint64_t state, std::span<std::int8_t> x) const {
    for (std::size_t b = 0; b < free_.size(); ++b) x[free_[b]] = ((state >> b) & 1U) ? 1 : -1;
  }
  /// Base configuration: clamped spins set, free spins -1.
  const std::vector<std::int8_t>& base() const { return base_; }

  /// β Σ_j Q_vj x_j + μ_v.
  double local_field(Vertex v, std::span<const std::int8_t> x) const {
    double m = 0.0;
    for (const Neighbor& nb : g_->neighbors(v)) m += nb.weight * x[nb.vertex];
    return p_->beta * m + p_->mu[v];
  }

 private:
  const InteractionGraph* g_;
  const IsingParams* p_;
  std::vector<Vertex> free_;
  std::vector<std::int8_t> base_;
};

namespace detail {

inline constexpr unsigned kChunkBits = 12;

template <class Visit>
void walk_chunk_gray(const StateSpace& sp, std::uint64_t begin, std::uint64_t end,
                     std::vector<std::int8_t>& x, Visit&& visit) {
  auto fr = sp.free();
  std::uint64_t code = begin ^ (begin >> 1);
  x = sp.base();
  sp.decode(code, x);
  double lw = log_weight(sp.graph(), sp.params(), x);
  visit(x, lw);
  for (std::uint64_t t = begin + 1; t < end; ++t) {
    const Vertex v = fr[std::countr_zero(t)];
    lw -= 2.0 * x[v] * sp.local_field(v, x);
    x[v] = static_cast<std::int8_t>(-x[v]);
    visit(x, lw);
  }
}

template <class Visit>
void walk_serial(const StateSpace& sp, std::vector<std::int8_t>& x, Visit&& visit) {
  x = sp.base();
  const std::uint64_t count = sp.state_count();
  for (std::uint64_t s = 0; s < count; ++s) {
    sp.decode(s, x);
    visit(x, log_weight(sp.graph(), sp.params(), x));
  }
}

}  // namespace detail

/// Accumulator concept: copyable, `add(x, w)` and `merge(other)`.
template <class Acc>
Acc enumerate(const StateSpace& sp, const Acc& proto, double& max_logw, Kernel kernel = Kernel::Parallel) {
  if (kernel == Kernel::Serial) {
    std::vector<std::int8_t> x;
    double mx = -std::numeric_limits<double>::infinity();
    detail::walk_serial(sp, x, [&](std::span<const std::int8_t>, double lw) { mx = std::max(mx, lw); });
    Acc acc = proto;
    detail::walk_serial(sp, x, [&](std::span<const std::int8_t> s, double lw) { acc.add(s, std::exp(lw - mx)); });
    max_logw = mx;
    return acc;
  }

  const std::uint64_t count = sp.state_count();
  const std::uint64_t chunk = std::min<std::uint64_t>(count, std::uint64_t{1} << detail::kChunkBits);
  const auto nchunks = static_cast<long long>(count / chunk);

  std::vector<double> chunk_max(nchunks);
#pragma omp parallel
  {
    std::vector<std::int8_t> x;
#pragma omp for schedule(dynamic)
    for (long long c = 0; c < nchunks; ++c) {
      double mx = -std::numeric_limits<double>::infinity();
      detail::walk_chunk_gray(sp, c * chunk, (c + 1) * chunk, x,
                              [&](std::span<const std::int8_t>, double lw) { mx = std::max(mx, lw); });
      chunk_max[c] = mx;
    }
  }
  const double mx = *std::max_element(chunk_max.begin(), chunk_max.end());

  std::vector<Acc> parts(nchunks, proto);
#pragma omp parallel
  {
    std::vector<std::int8_t> x;
#pragma omp for schedule(dynamic)
    for (long long c = 0; c < nchunks; ++c) {
      Acc& acc = parts[c];
      detail::walk_chunk_gray(sp, c * chunk, (c + 1) * chunk, x,
                              [&](std::span<const std::int8_t> s, double lw) { acc.add(s, std::exp(lw - mx)); });
    }
  }
  Acc total = proto;
  for (const Acc& a : parts) total.merge(a);
  max_logw = mx;
  return total;
}

struct ExactMoments {
  double log_z = 0.0;
  std::vector<double> means;
  std::vector<double> covs;  // row-major n×n

  std::size_t size() const { return means.size(); }
  double cov(Vertex i, Vertex j) const { return covs[static_cast<std::size_t>(i) * means.size() + j]; }
  /// E[X_i X_j] = Cov + E[X_i]E[X_j].
  double second(Vertex i, Vertex j) const { return cov(i, j) + means[i] * means[j]; }
};

double log_partition(const InteractionGraph& g, const IsingParams& p, Kernel kernel = Kernel::Parallel);

ExactMoments exact_moments(const InteractionGraph& g, const IsingParams& p, Kernel kernel = Kernel::Parallel);

/// Third joint cumulant of (X_a, X_b, X_c); indices may repeat.
double joint_third_cumulant(const InteractionGraph& g, const IsingParams& p, Vertex a, Vertex b, Vertex c);

/// All third joint cumulants κ(a,b,c), row-major n×n×n.
std::vector<double> third_cumulants(const InteractionGraph& g, const IsingParams& p);

/// Expectations of `k` statistics; `fn(x, out)` writes the k values for one state.
using StatisticFn = std::function<void(std::span<const std::int8_t>, std::span<double>)>;
std::vector<double> exact_expectations(const InteractionGraph& g, const IsingParams& p, std::size_t k,
                                       const StatisticFn& fn, Kernel kernel = Kernel::Parallel);

/// P(Σ_i X_i = 2k - n) for k = 0..n (full vertex set, clamped spins included).
std::vector<double> magnetization_distribution(const InteractionGraph& g, const IsingParams& p);

}  // namespace spinlab
