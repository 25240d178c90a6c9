#include "spinlab/decay.hpp"

#include <cmath>
#include <ostream>

#include "spinlab/error.hpp"
#include "spinlab/format.hpp"
#include "spinlab/rng.hpp"
#include "spinlab/samplers.hpp"

namespace spinlab {

namespace {

using PairList = std::vector<std::pair<Vertex, Vertex>>;

std::vector<PairList> interior_pairs(const InteractionGraph& g, int max_d, double margin) {
  const int side = g.info().side;
  const int d = g.dim();
  const int lo = static_cast<int>(std::ceil(margin * side));
  const int hi = side - 1 - lo;
  std::vector<PairList> out(static_cast<std::size_t>(max_d) + 1);
  std::vector<int> c(static_cast<std::size_t>(d));
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto cv = g.coords(static_cast<Vertex>(v));
    bool inside = true;
    for (int k = 0; k < d; ++k) inside = inside && cv[k] >= lo && cv[k] <= hi;
    if (!inside) continue;
    for (int axis = 0; axis < d; ++axis)
      for (int dist = 1; dist <= max_d && cv[axis] + dist <= hi; ++dist) {
        c.assign(cv.begin(), cv.end());
        c[axis] += dist;
        out[dist].emplace_back(static_cast<Vertex>(v), g.at(c));
      }
  }
  return out;
}

}  // namespace

TwoPointTable measure_two_point(const InteractionGraph& g, double beta, Boundary boundary, const TwoPointSpec& spec) {
  if (g.kind() != GraphKind::Lattice || !g.has_coords()) throw ParameterError("two-point measurement needs a lattice");
  if (beta < 0.0) throw ParameterError("cluster sampler needs beta >= 0");
  if (boundary == Boundary::Minus) throw UnsupportedError("use the plus boundary; the minus case follows by symmetry");
  if (spec.replicas < 2 || spec.sweeps < 1 || spec.burn_in < 0) throw ParameterError("two-point spec needs replicas >= 2 and sweeps >= 1");
  const int max_d = spec.max_distance > 0 ? spec.max_distance : g.info().side / 4;
  if (max_d < 1) throw ParameterError("lattice too small for any interior pair");
  const auto pairs = interior_pairs(g, max_d, spec.margin);
  for (int dist = 1; dist <= max_d; ++dist)
    if (pairs[dist].empty()) throw ParameterError("no interior pairs at distance " + std::to_string(dist));

  const IsingParams params = IsingParams::zero_field(g.size(), beta, boundary);
  validate(g, params);
  const std::size_t n = g.size();
  const auto reps = static_cast<long long>(spec.replicas);
  // est[r * (max_d + 1) + dist]
  std::vector<double> est(spec.replicas * static_cast<std::size_t>(max_d + 1), 0.0);

#pragma omp parallel for schedule(dynamic)
  for (long long r = 0; r < reps; ++r) {
    Rng rng(derive_seed(spec.seed, 0, static_cast<std::uint64_t>(r)));
    SpinConfig state = random_config(g, boundary, rng);
    ClusterUpdater up(g, params);
    std::vector<long> same(static_cast<std::size_t>(max_d) + 1, 0), conn(n, 0);
    std::vector<std::uint32_t> root(n);
    for (long t = 0; t < spec.burn_in + spec.sweeps; ++t) {
      up.sweep(state, rng);
      if (t < spec.burn_in) continue;
      auto& uf = up.clusters();
      const std::uint32_t ghost_root = uf.find(up.ghost());
      for (std::size_t v = 0; v < n; ++v) {
        root[v] = uf.find(static_cast<std::uint32_t>(v));
        conn[v] += root[v] == ghost_root;
      }
      for (int dist = 1; dist <= max_d; ++dist) {
        long s = 0;
        for (const auto& [i, j] : pairs[dist]) s += root[i] == root[j];
        same[dist] += s;
      }
    }
    const double T = static_cast<double>(spec.sweeps);
    for (int dist = 1; dist <= max_d; ++dist) {
      const double np = static_cast<double>(pairs[dist].size());
      double prod = 0.0;
      for (const auto& [i, j] : pairs[dist]) prod += (conn[i] / T) * (conn[j] / T);
      est[static_cast<std::size_t>(r) * (max_d + 1) + dist] = static_cast<double>(same[dist]) / (T * np) - prod / np;
    }
  }

  TwoPointTable table;
  std::vector<double> per(spec.replicas);
  for (int dist = 1; dist <= max_d; ++dist) {
    for (std::size_t r = 0; r < spec.replicas; ++r) per[r] = est[r * (max_d + 1) + dist];
    const auto ms = stats::mean_se(per);
    table.push_back({dist, ms.mean, ms.se, pairs[dist].size()});
  }
  return table;
}

DecayFit fit_decay_rate(const TwoPointTable& table) {
  std::vector<double> x, y;
  for (const auto& row : table)
    if (row.cov > 0.0 && row.cov > 3.0 * row.se) {
      x.push_back(row.distance);
      y.push_back(std::log(row.cov));
    }
  if (x.size() < 4) throw DegenerateError("decay fit needs at least 4 distances with cov > 3 se, got " + std::to_string(x.size()));
  const auto lf = stats::linear_fit(x, y);
  return {-lf.slope, lf.intercept, lf.r2, lf.slope_se, x.size()};
}

stats::RankCorrelation decay_trend(const TwoPointTable& table) {
  std::vector<double> d, c;
  for (const auto& row : table) {
    d.push_back(row.distance);
    c.push_back(row.cov);
  }
  return stats::spearman(d, c);
}

void write_two_point_csv(std::ostream& out, const TwoPointTable& table) {
  out << "distance,cov,se,pairs\n";
  for (const auto& r : table)
    out << r.distance << ',' << format_double(r.cov) << ',' << format_double(r.se) << ',' << r.pairs << '\n';
}

}  // namespace spinlab
