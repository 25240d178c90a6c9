#pragma once

#include <cstdint>

#include "spinlab/graph.hpp"
#include "spinlab/model.hpp"

namespace spinlab {

/// Monte Carlo budget for quantities that fall back to sampling when the
/// system is too large to enumerate.
struct McOptions {
  long sweeps = 20000;
  long burn_in = 1000;
  std::uint64_t seed = 0x5eed;
  std::size_t batches = 50;
};

struct ConditionD {
  double qnorm = 0.0;      // ‖Q‖_{∞→∞}
  double covrow = 0.0;     // max_i Σ_j Cov₀(X_i, X_j)
  double covrow_se = 0.0;  // 0 on the exact path
  Vertex argmax = 0;
  bool exact = true;
};

/// Dobrushin-type constants at zero field. Exact when the free spins fit the
/// enumeration cap, otherwise from a Swendsen-Wang chain: under a free
/// boundary Σ_j Cov₀(X_i, X_j) equals the mean FK cluster size of i, which is
/// what the chain averages; under Plus/Minus it averages x_i·S.
ConditionD condition_d_constants(const InteractionGraph& g, const IsingParams& params, const McOptions& mc = {});

struct SumVariance {
  double value = 0.0;
  double se = 0.0;
  bool exact = true;
};

/// Var₀(Σ_i X_i): exact when enumerable, otherwise Σ_C |C|² over FK clusters
/// (free boundary) or the plain sample variance (Plus/Minus).
SumVariance null_sum_variance(const InteractionGraph& g, double beta, Boundary boundary, const McOptions& mc = {});

}  // namespace spinlab
