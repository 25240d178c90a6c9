#pragma once

// Two-parameter (β, h) inference by maximum pseudo-likelihood.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <iosfwd>
#include <vector>

#include "spinlab/condition_d.hpp"
#include "spinlab/graph.hpp"
#include "spinlab/model.hpp"

namespace spinlab {

struct PseudoLikelihood {
  double value = 0.0;
  std::array<double, 2> gradient{};                  // (∂β, ∂h)
  std::array<std::array<double, 2>, 2> hessian{};    // negative semidefinite
};

/// Σ_i [x_i θ_i − log(2 cosh θ_i)], θ_i = β m_i + h, m_i = Σ_j Q_ij x_j, over
/// unclamped vertices.
PseudoLikelihood pseudo_loglik(double beta, double h, const SpinConfig& x, const InteractionGraph& g);

struct FitOptions {
  double tol = 1e-8;
  int max_iter = 100;
  double beta_max = 5.0;
  /// Starting point; default (0, atanh(clamp(x̄, ±0.99))).
  std::optional<std::array<double, 2>> init;
};

struct EstimateRecord {
  std::size_t n = 0;
  double beta_hat = 0.0;
  double h_hat = 0.0;
  double beta_true = 0.0;
  double h_true = 0.0;
  bool converged = false;
  int iterations = 0;
  double objective_final = 0.0;
};

/// Projected Newton ascent with step halving; β kept in [0, beta_max].
/// Converged when the projected gradient norm drops below tol.
/// Throws DegenerateError when the free spins are all equal.
EstimateRecord fit_pseudo_likelihood(const SpinConfig& x, const InteractionGraph& g, const FitOptions& opts = {});

struct LowerBound {
  double q_sq = 0.0;   // Σ_ij Q_ij²
  double var_s = 0.0;  // Var₀(Σ X_i)
  double var_se = 0.0;
  double bound = 0.0;  // 1/q_sq + 1/var_s (unit constant)
  bool exact = true;
};

LowerBound lower_bound_value(const InteractionGraph& g, double beta, const McOptions& mc = {});

struct MseRow {
  std::size_t n = 0;
  double mse_beta = 0.0;
  double mse_h = 0.0;
  double bound_qsq = 0.0;  // 1/Σ Q²
  double bound_var = 0.0;  // 1/Var₀(Σ X)
  double slope_running = 0.0;  // log-log slope of mse_beta + mse_h over rows so far
  std::size_t excluded = 0;
  std::size_t fits = 0;
  double slope_beta = 0.0;  // running slopes per parameter
  double slope_h = 0.0;
};

struct MseSpec {
  double beta = 0.0;
  double h = 0.0;
  std::vector<std::size_t> n_grid;
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
  long sweeps = 0;  // per replicate draw; 0 → default
  McOptions bound_mc{};
};

using GraphFactory = std::function<InteractionGraph(std::size_t n)>;

/// 2-D square box with side √n (n must be a perfect square).
InteractionGraph square_lattice_of_size(std::size_t n);

/// Per n: draw replicates, fit each, report MSEs, the lower-bound terms and
/// running log-log slopes. Degenerate fits are excluded and counted.
std::vector<MseRow> mse_experiment(const GraphFactory& model, const MseSpec& spec);

/// Header `n,mse_beta,mse_h,bound_qsq,bound_var,slope_running,excluded`.
void write_mse_csv(std::ostream& out, const std::vector<MseRow>& rows);

}  // namespace spinlab
