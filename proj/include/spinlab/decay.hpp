#pragma once

// Truncated two-point function on lattices, measured with Swendsen-Wang
// cluster estimators, and exponential decay fits.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "spinlab/graph.hpp"
#include "spinlab/model.hpp"
#include "spinlab/stats.hpp"

namespace spinlab {

struct TwoPointSpec {
  long sweeps = 2000;     // measurement sweeps per replica
  long burn_in = 200;
  std::size_t replicas = 16;
  std::uint64_t seed = 1;
  int max_distance = 0;   // 0 → side/4
  double margin = 0.25;   // pair endpoints stay ≥ margin·side from the box faces
};

struct TwoPointRow {
  int distance = 0;
  double cov = 0.0;
  double se = 0.0;
  std::size_t pairs = 0;
};

using TwoPointTable = std::vector<TwoPointRow>;

/// Zero-field Cov(X_i, X_j) per axis distance 1..max_distance, averaged over
/// axis-aligned interior pairs. Per sweep the pair term is 1[i ↔ j] and the
/// mean term 1[i ↔ ghost]; replicas are independent chains run in parallel
/// and the SE is the spread across replicas.
TwoPointTable measure_two_point(const InteractionGraph& g, double beta, Boundary boundary,
                                const TwoPointSpec& spec = {});

struct DecayFit {
  double rate = 0.0;       // −slope of log cov against distance
  double intercept = 0.0;
  double r2 = 0.0;
  double rate_se = 0.0;
  std::size_t used = 0;
};

/// Least squares on (distance, log cov) over rows with cov > 3·se.
/// Throws DegenerateError with fewer than 4 usable rows.
DecayFit fit_decay_rate(const TwoPointTable& table);

/// Spearman correlation of cov against distance over all rows.
stats::RankCorrelation decay_trend(const TwoPointTable& table);

/// Header `distance,cov,se,pairs`.
void write_two_point_csv(std::ostream& out, const TwoPointTable& table);

}  // namespace spinlab
