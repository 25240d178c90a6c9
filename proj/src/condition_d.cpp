#include "spinlab/condition_d.hpp"

#include <algorithm>
#include <vector>

#include "spinlab/error.hpp"
#include "spinlab/exact.hpp"
#include "spinlab/samplers.hpp"
#include "spinlab/stats.hpp"

namespace spinlab {

namespace {

bool enumerable(const InteractionGraph& g, Boundary b) { return free_vertices(g, b).size() <= kMaxFreeSpins; }

void require_zero_field(const IsingParams& p) {
  for (double m : p.mu)
    if (m != 0.0) throw ParameterError("Condition (D) constants are defined at zero field");
}

void check_mc(const McOptions& mc) {
  if (mc.sweeps <= mc.burn_in || mc.batches < 2 || mc.sweeps - mc.burn_in < static_cast<long>(2 * mc.batches))
    throw ParameterError("Monte Carlo options need sweeps - burn_in >= 2·batches");
}

// Post-burn-in sweep index → batch index.
std::size_t batch_of(long t, long total, std::size_t batches) {
  return std::min(batches - 1, static_cast<std::size_t>(t * static_cast<long>(batches) / total));
}

}  // namespace

ConditionD condition_d_constants(const InteractionGraph& g, const IsingParams& params, const McOptions& mc) {
  validate(g, params);
  require_zero_field(params);
  ConditionD out;
  out.qnorm = g.max_row_sum();
  const std::size_t n = g.size();

  if (enumerable(g, params.boundary)) {
    const ExactMoments m = exact_moments(g, params);
    out.covrow = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += m.covs[i * n + j];
      if (row > out.covrow) {
        out.covrow = row;
        out.argmax = static_cast<Vertex>(i);
      }
    }
    return out;
  }

  check_mc(mc);
  out.exact = false;
  const long total = mc.sweeps - mc.burn_in;
  const std::size_t nb = mc.batches;
  // Per-batch sums: a[b][v] (cluster size, or x_v S), x[b][v], s[b].
  std::vector<double> a(nb * n, 0.0), xs(nb * n, 0.0), ssum(nb, 0.0);
  std::vector<long> counts(nb, 0);
  const bool free_boundary = params.boundary == Boundary::Free;

  Rng rng(mc.seed);
  SpinConfig state = random_config(g, params.boundary, rng);
  ClusterUpdater up(g, params);
  for (long t = 0; t < mc.sweeps; ++t) {
    up.sweep(state, rng);
    if (t < mc.burn_in) continue;
    const std::size_t b = batch_of(t - mc.burn_in, total, nb);
    ++counts[b];
    double* ab = a.data() + b * n;
    if (free_boundary) {
      auto& uf = up.clusters();
      for (std::size_t v = 0; v < n; ++v) ab[v] += uf.component_size(static_cast<std::uint32_t>(v));
    } else {
      const double s = static_cast<double>(state.magnetization());
      ssum[b] += s;
      double* xb = xs.data() + b * n;
      for (std::size_t v = 0; v < n; ++v) {
        ab[v] += state.spins[v] * s;
        xb[v] += state.spins[v];
      }
    }
  }

  auto batch_value = [&](std::size_t b, std::size_t v) {
    const double c = static_cast<double>(counts[b]);
    if (free_boundary) return a[b * n + v] / c;
    return a[b * n + v] / c - (xs[b * n + v] / c) * (ssum[b] / c);
  };
  std::vector<double> per_batch(nb);
  out.covrow = -1.0;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t b = 0; b < nb; ++b) per_batch[b] = batch_value(b, v);
    const auto est = stats::mean_se(per_batch);
    if (est.mean > out.covrow) {
      out.covrow = est.mean;
      out.covrow_se = est.se;
      out.argmax = static_cast<Vertex>(v);
    }
  }
  return out;
}

SumVariance null_sum_variance(const InteractionGraph& g, double beta, Boundary boundary, const McOptions& mc) {
  const IsingParams params = IsingParams::zero_field(g.size(), beta, boundary);
  validate(g, params);
  SumVariance out;
  if (enumerable(g, boundary)) {
    const ExactMoments m = exact_moments(g, params);
    for (double c : m.covs) out.value += c;
    return out;
  }

  check_mc(mc);
  out.exact = false;
  const long total = mc.sweeps - mc.burn_in;
  std::vector<double> series;
  series.reserve(static_cast<std::size_t>(total));
  const std::size_t n = g.size();
  std::vector<std::uint8_t> seen(n + 1);

  Rng rng(mc.seed);
  SpinConfig state = random_config(g, boundary, rng);
  ClusterUpdater up(g, params);
  for (long t = 0; t < mc.sweeps; ++t) {
    up.sweep(state, rng);
    if (t < mc.burn_in) continue;
    if (boundary == Boundary::Free) {
      auto& uf = up.clusters();
      std::fill(seen.begin(), seen.end(), 0);
      double sq = 0.0;
      for (std::size_t v = 0; v < n; ++v) {
        const std::uint32_t r = uf.find(static_cast<std::uint32_t>(v));
        if (!seen[r]) {
          seen[r] = 1;
          const double c = uf.component_size(r);
          sq += c * c;
        }
      }
      series.push_back(sq);
    } else {
      series.push_back(static_cast<double>(state.magnetization()));
    }
  }

  if (boundary == Boundary::Free) {
    const auto est = stats::batch_means(series, mc.batches);
    out.value = est.mean;
    out.se = est.se;
    return out;
  }
  const std::size_t nb = mc.batches;
  const std::size_t len = series.size() / nb;
  std::vector<double> vars(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    std::span<const double> part(series.data() + b * len, len);
    double m = 0.0, m2 = 0.0;
    for (double s : part) {
      m += s;
      m2 += s * s;
    }
    m /= static_cast<double>(len);
    vars[b] = m2 / static_cast<double>(len) - m * m;
  }
  const auto est = stats::mean_se(vars);
  out.value = est.mean;
  out.se = est.se;
  return out;
}

}  // namespace spinlab
