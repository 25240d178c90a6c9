#include "spinlab/exact.hpp"

#include <string>

#include "spinlab/error.hpp"

namespace spinlab {

StateSpace::StateSpace(const InteractionGraph& g, const IsingParams& p) : g_(&g), p_(&p) {
  validate(g, p);
  free_ = free_vertices(g, p.boundary);
  if (free_.size() > kMaxFreeSpins)
    throw SizeError("exact enumeration over " + std::to_string(free_.size()) + " free spins exceeds the cap of " +
                    std::to_string(kMaxFreeSpins));
  SpinConfig c = make_config(g, p.boundary, -1);
  base_ = std::move(c.spins);
}

namespace {

struct WeightSum {
  double z = 0.0;
  void add(std::span<const std::int8_t>, double w) { z += w; }
  void merge(const WeightSum& o) { z += o.z; }
};

// First and second moments over the free vertices only.
struct MomentSums {
  std::vector<Vertex> idx;
  double z = 0.0;
  std::vector<double> first;
  std::vector<double> second;  // upper triangle, m×m row-major

  explicit MomentSums(std::span<const Vertex> fr)
      : idx(fr.begin(), fr.end()), first(fr.size(), 0.0), second(fr.size() * fr.size(), 0.0) {}

  void add(std::span<const std::int8_t> x, double w) {
    const std::size_t m = idx.size();
    z += w;
    for (std::size_t a = 0; a < m; ++a) {
      const double wa = w * x[idx[a]];
      first[a] += wa;
      double* row = second.data() + a * m;
      for (std::size_t b = a + 1; b < m; ++b) row[b] += wa * x[idx[b]];
    }
  }
  void merge(const MomentSums& o) {
    z += o.z;
    for (std::size_t a = 0; a < first.size(); ++a) first[a] += o.first[a];
    for (std::size_t a = 0; a < second.size(); ++a) second[a] += o.second[a];
  }
};

struct StatisticSums {
  const StatisticFn* fn;
  double z = 0.0;
  std::vector<double> sums;
  std::vector<double> scratch;

  StatisticSums(const StatisticFn& f, std::size_t k) : fn(&f), sums(k, 0.0), scratch(k, 0.0) {}

  void add(std::span<const std::int8_t> x, double w) {
    (*fn)(x, scratch);
    z += w;
    for (std::size_t a = 0; a < sums.size(); ++a) sums[a] += w * scratch[a];
  }
  void merge(const StatisticSums& o) {
    z += o.z;
    for (std::size_t a = 0; a < sums.size(); ++a) sums[a] += o.sums[a];
  }
};

}  // namespace

double log_partition(const InteractionGraph& g, const IsingParams& p, Kernel kernel) {
  StateSpace sp(g, p);
  double mx = 0.0;
  WeightSum s = enumerate(sp, WeightSum{}, mx, kernel);
  return mx + std::log(s.z);
}

ExactMoments exact_moments(const InteractionGraph& g, const IsingParams& p, Kernel kernel) {
  StateSpace sp(g, p);
  double mx = 0.0;
  MomentSums s = enumerate(sp, MomentSums(sp.free()), mx, kernel);

  const std::size_t n = g.size();
  ExactMoments out;
  out.log_z = mx + std::log(s.z);
  out.means.assign(n, 0.0);
  out.covs.assign(n * n, 0.0);
  for (Vertex v : g.boundary())
    if (p.boundary != Boundary::Free) out.means[v] = clamp_sign(p.boundary);

  const auto& fr = sp.free();
  const std::size_t m = fr.size();
  for (std::size_t a = 0; a < m; ++a) out.means[fr[a]] = s.first[a] / s.z;
  for (std::size_t a = 0; a < m; ++a) {
    const Vertex i = fr[a];
    out.covs[i * n + i] = 1.0 - out.means[i] * out.means[i];
    for (std::size_t b = a + 1; b < m; ++b) {
      const Vertex j = fr[b];
      const double c = s.second[a * m + b] / s.z - out.means[i] * out.means[j];
      out.covs[i * n + j] = c;
      out.covs[j * n + i] = c;
    }
  }
  return out;
}

std::vector<double> exact_expectations(const InteractionGraph& g, const IsingParams& p, std::size_t k,
                                       const StatisticFn& fn, Kernel kernel) {
  StateSpace sp(g, p);
  double mx = 0.0;
  StatisticSums s = enumerate(sp, StatisticSums(fn, k), mx, kernel);
  for (double& v : s.sums) v /= s.z;
  return s.sums;
}

namespace {

double cumulant3(double m1, double m2, double m3, double m12, double m13, double m23, double m123) {
  return m123 - m12 * m3 - m13 * m2 - m23 * m1 + 2.0 * m1 * m2 * m3;
}

}  // namespace

double joint_third_cumulant(const InteractionGraph& g, const IsingParams& p, Vertex a, Vertex b, Vertex c) {
  const auto n = static_cast<Vertex>(g.size());
  if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n) throw ParameterError("vertex out of range");
  StatisticFn fn = [a, b, c](std::span<const std::int8_t> x, std::span<double> out) {
    out[0] = x[a];
    out[1] = x[b];
    out[2] = x[c];
    out[3] = x[a] * x[b];
    out[4] = x[a] * x[c];
    out[5] = x[b] * x[c];
    out[6] = x[a] * x[b] * x[c];
  };
  auto e = exact_expectations(g, p, 7, fn);
  return cumulant3(e[0], e[1], e[2], e[3], e[4], e[5], e[6]);
}

std::vector<double> third_cumulants(const InteractionGraph& g, const IsingParams& p) {
  const std::size_t n = g.size();
  if (n > 12) throw SizeError("third_cumulants: tensor limited to 12 vertices");
  const std::size_t n2 = n * n;
  // Statistics: x_a (n), x_a x_b (n²), x_a x_b x_c (n³).
  StatisticFn fn = [n, n2](std::span<const std::int8_t> x, std::span<double> out) {
    for (std::size_t a = 0; a < n; ++a) {
      out[a] = x[a];
      for (std::size_t b = 0; b < n; ++b) {
        const int ab = x[a] * x[b];
        out[n + a * n + b] = ab;
        for (std::size_t c = 0; c < n; ++c) out[n + n2 + a * n2 + b * n + c] = ab * x[c];
      }
    }
  };
  auto e = exact_expectations(g, p, n + n2 + n2 * n, fn);
  std::vector<double> k3(n2 * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        k3[a * n2 + b * n + c] = cumulant3(e[a], e[b], e[c], e[n + a * n + b], e[n + a * n + c],
                                           e[n + b * n + c], e[n + n2 + a * n2 + b * n + c]);
  return k3;
}

std::vector<double> magnetization_distribution(const InteractionGraph& g, const IsingParams& p) {
  const std::size_t n = g.size();
  StatisticFn fn = [n](std::span<const std::int8_t> x, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    long long s = 0;
    for (auto v : x) s += v;
    out[static_cast<std::size_t>((s + static_cast<long long>(n)) / 2)] = 1.0;
  };
  return exact_expectations(g, p, n + 1, fn);
}

}  // namespace spinlab
