#pragma once

// Correlation inequalities checked by exact enumeration on small ferromagnetic
// systems. Each margin is the smallest slack over all assertions of a check:
// a system passes when margin >= -tolerance.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinlab/graph.hpp"
#include "spinlab/model.hpp"

namespace spinlab {

inline constexpr double kPropTolerance = 1e-9;

/// min over triples (with repetition) of −κ(a,b,c). Needs β ≥ 0, μ ≥ 0
/// (μ ≤ 0 under Minus is not accepted), Free or Plus boundary.
double ghs_margin(const InteractionGraph& g, const IsingParams& params);

/// min over pairs of Cov(X_i, X_j) and over vertices of E[X_i].
double gks_margin(const InteractionGraph& g, const IsingParams& params);

/// Increasing 0/1 function given as an OR of AND-clauses of events {x_v = +1}.
struct MonotoneFn {
  std::vector<std::vector<Vertex>> clauses;
  double operator()(std::span<const std::int8_t> x) const;
};

MonotoneFn random_monotone(std::size_t n, std::uint64_t seed);

/// min over `trials` random increasing pairs of E[fg] − E[f]E[g].
double fkg_margin(const InteractionGraph& g, const IsingParams& params, std::size_t trials, std::uint64_t seed);

/// For couplings Q1 ≥ Q2 ≥ 0 on the same vertex set, zero field, free boundary:
/// min over pairs of Cov₁(X_i,X_j) − Cov₂(X_i,X_j).
double griffiths2_margin(const InteractionGraph& dominant, const InteractionGraph& dominated, double beta);

/// For fields μ1 ≥ μ2 ≥ 0: min over pairs of Cov_{μ2} − Cov_{μ1}.
double field_ordering_margin(const InteractionGraph& g, double beta, const std::vector<double>& mu_large,
                             const std::vector<double>& mu_small, Boundary boundary = Boundary::Free);

/// Free boundary, β ≥ 0, μ ≥ 0. Asserts, per vertex,
///   (a) E[X_i] ≥ 0;
///   (b) E[X_i] ≥ (3/4)μ_i whenever E[X_i] ≤ 1/2, and E[X_i] ≥ μ_i/(2M) otherwise (M = ‖μ‖∞);
///   (c) E[X_i] ≤ covrow·M + Var₀(X_i)·μ_i with zero-field constants.
double mean_bounds_margin(const InteractionGraph& g, const IsingParams& params);

struct CheckReport {
  std::string check;
  std::size_t systems = 0;
  std::size_t passes = 0;
  double worst_margin = 0.0;
  std::optional<std::string> counterexample;  // first failing system, replayable
  bool ok() const { return passes == systems; }
};

struct FamilySpec {
  std::size_t systems = 200;
  std::size_t max_n = 5;
  double max_beta = 1.5;
  double edge_prob = 0.6;
  double max_field = 1.0;
  std::size_t fkg_trials = 20;
  std::uint64_t seed = 0x9d5;
};

/// Random ferromagnetic system: n in [1, max_n], couplings in (0, 1], β in
/// [0, max_beta], μ in [0, max_field]ⁿ, random boundary subset.
struct RandomSystem {
  InteractionGraph graph;
  IsingParams params;
};
RandomSystem random_system(const FamilySpec& spec, std::uint64_t seed, Boundary boundary = Boundary::Free);

std::string describe(const InteractionGraph& g, const IsingParams& params);

/// Check names: ghs, gks, fkg, griffiths2, field_ordering, mean_bounds.
const std::vector<std::string>& check_names();

/// Runs one named check over the seeded family. Systems run in parallel.
CheckReport run_check(const std::string& name, const FamilySpec& spec = {});

std::vector<CheckReport> run_all_checks(const FamilySpec& spec = {});

/// JSON array of {check, systems, passes, worst_margin[, counterexample]}.
void write_reports_json(std::ostream& out, const std::vector<CheckReport>& reports);

}  // namespace spinlab
