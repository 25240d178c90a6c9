#pragma once

// Sparse-magnetization detection: H0 μ = 0 against fields with s nonzero
// coordinates of size at least A, tested through the total magnetization.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinlab/condition_d.hpp"
#include "spinlab/graph.hpp"
#include "spinlab/model.hpp"
#include "spinlab/samplers.hpp"
#include "spinlab/stats.hpp"

namespace spinlab {

/// L_n = (s·tanh(A)/√n)^{1/2}; grows without bound in the detectable regime
/// s·tanh(A) ≫ √n and equals 1 on the boundary s·tanh(A) = √n.
double threshold_multiplier(std::size_t n, std::size_t s, double A);

/// Rejection cutoff L_n·√n for Σ X_i. Throws ParameterError unless A > 0, s ≥ 1.
double threshold(std::size_t n, std::size_t s, double A);

/// 1 iff Σ x_i − center > cutoff.
int run_test(const SpinConfig& x, double cutoff, double center = 0.0);
inline int run_test_sum(double sum, double cutoff, double center = 0.0) { return sum - center > cutoff ? 1 : 0; }

enum class Placement { RandomUniform, IsolatedFirst, ClusteredBall, Spread };
enum class ValueRule { ExactlyA, AtLeastA };

std::string to_string(Placement p);
Placement parse_placement(const std::string& s);

struct SignalClass {
  std::size_t s = 1;
  double A = 0.0;
  Placement placement = Placement::RandomUniform;
  ValueRule value_rule = ValueRule::ExactlyA;
  double cap = 0.0;  // upper end M for AtLeastA
};

struct PlacedSignal {
  std::vector<double> mu;
  std::vector<Vertex> support;
  bool fell_back = false;  // IsolatedFirst ran out of isolated vertices
};

/// Field with exactly s nonzero coordinates chosen by the placement rule:
///   RandomUniform - uniform s-subset;
///   IsolatedFirst - zero-degree vertices first (random order), then uniform;
///   ClusteredBall - BFS ball around a uniform random centre;
///   Spread        - evenly spaced indices ⌊k·n/s⌋.
PlacedSignal place_signal(const InteractionGraph& g, const SignalClass& cls, std::uint64_t seed);

enum class SamplerChoice { Auto, Glauber, Cluster, CurieWeissDirect };

struct RiskSpec {
  Boundary boundary = Boundary::Free;
  std::optional<double> cutoff;          // default: threshold(n, s, A)
  std::vector<Placement> adversaries;    // default: {cls.placement}
  SamplerChoice sampler = SamplerChoice::Auto;
  long sweeps = 0;                       // per replicate; 0 selects a default
  std::optional<double> center;          // default: 0 (Free) or calibrated
};

struct RiskRow {
  std::size_t s = 0;
  double A = 0.0;
  double type_I = 0.0;
  double worst_type_II = 0.0;
  double risk = 0.0;
  std::size_t replicates = 0;
  double se = 0.0;
  double se_type_I = 0.0;
  double se_type_II = 0.0;
  double cutoff = 0.0;
  double center = 0.0;
  Placement worst_placement = Placement::RandomUniform;
};

using RiskCurve = std::vector<RiskRow>;

/// Σ_i X_i for `replicates` independent draws from (g, β, μ, boundary).
/// Replicate r uses seed derive_seed(seed, stream, r); the draw loop runs in
/// parallel and the result does not depend on the thread count.
std::vector<double> sample_sums(const InteractionGraph& g, const IsingParams& params, std::size_t replicates,
                                std::uint64_t seed, SamplerChoice sampler = SamplerChoice::Auto, long sweeps = 0);

/// Centering Σ_i E₀[X_i] for the null with the given boundary: 0 for Free,
/// exact when enumerable, otherwise the mean of `replicates` calibration draws.
stats::MeanSe null_center(const InteractionGraph& g, double beta, Boundary boundary, std::size_t replicates,
                          std::uint64_t seed, SamplerChoice sampler = SamplerChoice::Auto, long sweeps = 0);

/// Type I error under μ = 0 plus the worst type II error over the adversary
/// placements (each placement drawn once from the seed). Binomial standard
/// errors; calibration uncertainty in the centre is folded in.
RiskRow estimate_risk(const InteractionGraph& g, double beta, const SignalClass& cls, const RiskSpec& spec,
                      std::size_t replicates, std::uint64_t seed);

/// estimate_risk over a grid of A values (null draws shared across the grid).
RiskCurve detection_sweep(const InteractionGraph& g, double beta, std::size_t s, const std::vector<double>& A_grid,
                          std::size_t replicates, std::uint64_t seed, const RiskSpec& spec = {},
                          const SignalClass& shape = {});

/// Header `s,A,type_I,worst_type_II,risk,replicates,se`.
void write_risk_csv(std::ostream& out, const RiskCurve& curve);

struct ConditionDReport {
  ConditionD constants;
  double variance_bound = 0.0;  // covrow·n ≥ Var₀(Σ X_i)
  std::size_t n = 0;
};

ConditionDReport condition_d_report(const InteractionGraph& g, double beta, Boundary boundary = Boundary::Free,
                                    const McOptions& mc = {});

/// Critical values used as experiment defaults.
namespace critical_beta {
inline double curie_weiss() { return 1.0; }
double erdos_renyi(double lambda);
double regular_tree(int k);
double square_lattice();
}  // namespace critical_beta

struct CriticalScalingSpec {
  int d = 2;
  std::vector<int> sides;
  double beta = 0.0;
  std::vector<double> field_grid;
  long sweeps = 4000;   // measurement sweeps per side / field value
  long burn_in = 500;
  std::uint64_t seed = 1;
};

struct CriticalSizeRow {
  int side = 0;
  std::size_t n = 0;
  double second_moment = 0.0;  // E[S²]
  double se = 0.0;
};

struct CriticalFieldRow {
  int side = 0;
  double h = 0.0;
  double mean_sum = 0.0;
  double se = 0.0;
};

struct CriticalScalingResult {
  double beta = 0.0;
  std::vector<CriticalSizeRow> sizes;
  double alpha_side = 0.0;    // E[S²] ∝ L^α
  double alpha_side_se = 0.0;
  double alpha_volume = 0.0;  // E[S²] ∝ n^α (= α_side / d)
  std::vector<CriticalFieldRow> field;
};

/// Free-boundary box, Swendsen-Wang driven. E[S²] uses the cluster estimator
/// Σ_C |C|² at zero field; field rows report E_h[S] on the largest side.
/// Throws UnsupportedError unless d == 2.
CriticalScalingResult critical_scaling_experiment(const CriticalScalingSpec& spec);

void write_critical_csv(std::ostream& out, const CriticalScalingResult& r);

}  // namespace spinlab
