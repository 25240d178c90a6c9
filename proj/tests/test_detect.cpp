#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <set>
#include <sstream>

#include "spinlab/detect.hpp"
#include "spinlab/error.hpp"

using namespace spinlab;

TEST(Threshold, WorkedValues) {
  // tanh(A) = 1 up to rounding.
  EXPECT_NEAR(threshold_multiplier(100, 10, 40.0), 1.0, 1e-12);
  EXPECT_NEAR(threshold(100, 10, 40.0), 10.0, 1e-10);
  const double a = std::atanh(0.5);  // s·tanh(A) = 20·0.5 = 10 = √100
  EXPECT_NEAR(threshold_multiplier(100, 20, a), 1.0, 1e-12);
  EXPECT_NEAR(threshold_multiplier(10000, 10000, 0.01), 1.0, 1e-4);
  EXPECT_NEAR(threshold(10000, 10000, 0.01), 100.0, 1e-2);
  EXPECT_THROW(threshold(100, 10, 0.0), ParameterError);
  EXPECT_THROW(threshold(100, 0, 1.0), ParameterError);
}

TEST(Threshold, GrowsAboveBoundary) {
  const std::size_t n = 2500;
  const double boundary = std::atanh(std::sqrt(2500.0) / n);
  EXPECT_NEAR(threshold_multiplier(n, n, boundary), 1.0, 1e-12);
  EXPECT_GT(threshold_multiplier(n, n, 4 * boundary), 1.9);
  EXPECT_LT(threshold_multiplier(n, n, boundary / 4), 0.51);
}

TEST(RunTest, Decisions) {
  const auto g = build_lattice(2, 10);
  SpinConfig x = make_config(g, Boundary::Free, 1);
  EXPECT_EQ(run_test(x, 50.0), 1);
  EXPECT_EQ(run_test(x, 100.0), 0);
  EXPECT_EQ(run_test(x, 50.0, 60.0), 0);
  EXPECT_EQ(run_test_sum(-3.0, -4.0), 1);
}

TEST(Placement, Rules) {
  const auto lat = build_lattice(2, 10);
  for (Placement p : {Placement::RandomUniform, Placement::IsolatedFirst, Placement::ClusteredBall, Placement::Spread}) {
    const auto full = place_signal(lat, {100, 0.3, p}, 5);
    for (double m : full.mu) EXPECT_DOUBLE_EQ(m, 0.3);
    const auto part = place_signal(lat, {9, 0.3, p}, 5);
    EXPECT_EQ(part.support.size(), 9u);
    EXPECT_EQ(std::set<Vertex>(part.support.begin(), part.support.end()).size(), 9u);
    std::size_t nonzero = 0;
    for (double m : part.mu) nonzero += m != 0.0;
    EXPECT_EQ(nonzero, 9u);
  }
  const auto ball = place_signal(lat, {9, 0.3, Placement::ClusteredBall}, 11);
  std::size_t far = 0;
  for (Vertex a : ball.support)
    for (Vertex b : ball.support) far = std::max(far, graph_distance(lat, a, b));
  EXPECT_LE(far, 4u);

  const auto er = build_erdos_renyi(10000, 1.0, 3);
  const auto iso = place_signal(er, {100, 0.3, Placement::IsolatedFirst}, 2);
  EXPECT_FALSE(iso.fell_back);
  for (Vertex v : iso.support) EXPECT_EQ(er.degree(v), 0u);

  const auto cw = build_curie_weiss(10);
  const auto fb = place_signal(cw, {3, 0.3, Placement::IsolatedFirst}, 2);
  EXPECT_TRUE(fb.fell_back);

  SignalClass range{5, 0.2, Placement::Spread, ValueRule::AtLeastA, 0.9};
  const auto r = place_signal(lat, range, 1);
  for (Vertex v : r.support) {
    EXPECT_GE(r.mu[v], 0.2);
    EXPECT_LE(r.mu[v], 0.9);
  }
  EXPECT_THROW(place_signal(lat, {101, 0.3}, 1), ParameterError);
  EXPECT_THROW(parse_placement("nowhere"), ParameterError);
  EXPECT_EQ(parse_placement(to_string(Placement::ClusteredBall)), Placement::ClusteredBall);
}

TEST(Risk, IndependentSpinsMatchBinomialOracle) {
  const std::size_t n = 400, reps = 2000;
  const auto g = build_lattice(2, 20);
  for (double ratio : {0.5, 1.0, 2.0}) {
    const double A = std::atanh(ratio * std::sqrt(static_cast<double>(n)) / n);
    const SignalClass cls{n, A};
    const auto row = estimate_risk(g, 0.0, cls, {}, reps, 77);
    const double c = row.cutoff;
    EXPECT_NEAR(c, threshold(n, n, A), 1e-12);
    const double k = (c + n) / 2.0;
    const double t1 = stats::binomial_upper_tail(n, 0.5, k);
    const double t2 = 1.0 - stats::binomial_upper_tail(n, (1.0 + std::tanh(A)) / 2.0, k);
    EXPECT_NEAR(row.type_I, t1, 3 * std::sqrt(t1 * (1 - t1) / reps) + 1e-3);
    EXPECT_NEAR(row.worst_type_II, t2, 3 * std::sqrt(t2 * (1 - t2) / reps) + 1e-3);
    EXPECT_NEAR(row.risk, row.type_I + row.worst_type_II, 1e-15);
  }
}

TEST(Risk, DichotomyAtIndependence) {
  const std::size_t n = 400;
  const auto g = build_lattice(2, 20);
  const double rn = std::sqrt(static_cast<double>(n));
  const auto strong = estimate_risk(g, 0.0, {n, std::atanh(20 * rn / n)}, {}, 1000, 1);
  EXPECT_LT(strong.risk, 0.1);
  const auto weak = estimate_risk(g, 0.0, {n, std::atanh(0.1 * rn / n)}, {}, 1000, 2);
  EXPECT_GT(weak.risk, 0.5);
  const auto saturated = estimate_risk(g, 0.0, {n, 50.0}, {}, 500, 3);
  EXPECT_DOUBLE_EQ(saturated.worst_type_II, 0.0);
  EXPECT_DOUBLE_EQ(saturated.risk, saturated.type_I);
}

TEST(Risk, TypeOneSymmetricAroundZero) {
  // Under μ = 0 with a free boundary S is symmetric, so P(S > c) = P(S < -c).
  const auto g = build_lattice(2, 12);
  const auto sums = sample_sums(g, IsingParams::zero_field(144, 0.3), 4000, 9, SamplerChoice::Cluster, 50);
  double up = 0, down = 0;
  for (double s : sums) {
    up += s > 10;
    down += s < -10;
  }
  const double se = std::sqrt((up + down)) / 4000.0;
  EXPECT_NEAR(up / 4000.0, down / 4000.0, 4 * se + 1e-3);
}

TEST(Risk, SweepDecreasesThroughBoundary) {
  const std::size_t n = 400;
  const auto g = build_lattice(2, 20);
  const double a_star = std::atanh(std::sqrt(static_cast<double>(n)) / n);
  const std::vector<double> grid{a_star / 4, a_star, 4 * a_star, 16 * a_star};
  RiskSpec spec;
  spec.sweeps = 100;
  const auto curve = detection_sweep(g, 0.2, n, grid, 600, 4, spec);
  ASSERT_EQ(curve.size(), grid.size());
  for (std::size_t k = 1; k < curve.size(); ++k) EXPECT_LE(curve[k].risk, curve[k - 1].risk + 2 * std::hypot(curve[k].se, curve[k - 1].se));
  EXPECT_GT(curve.front().risk - curve.back().risk, 0.3);
  std::ostringstream csv;
  write_risk_csv(csv, curve);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "s,A,type_I,worst_type_II,risk,replicates,se");
}

TEST(Risk, CurieWeissSweepSpansBoundary) {
  const std::size_t n = 1000;
  const auto g = build_curie_weiss(n);
  const double a_star = std::atanh(std::sqrt(static_cast<double>(n)) / n);
  const auto curve = detection_sweep(g, 0.5, n, {a_star / 10, 20 * a_star}, 1000, 8);
  EXPECT_GE(curve[0].risk - curve[1].risk, 0.3);
}

TEST(Risk, PlusBoundaryIsCentred) {
  const auto g = build_lattice(2, 4);
  const auto c = null_center(g, 0.4, Boundary::Plus, 100, 1);
  EXPECT_GT(c.mean, 12.0);  // twelve clamped +1 spins plus positive interior means
  EXPECT_DOUBLE_EQ(c.se, 0.0);
  EXPECT_DOUBLE_EQ(null_center(g, 0.4, Boundary::Free, 100, 1).mean, 0.0);
}

TEST(Risk, DeterministicAcrossThreadCounts) {
  const auto g = build_lattice(2, 16);
  const auto p = IsingParams::uniform_field(256, 0.3, 0.01);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto a = sample_sums(g, p, 64, 123, SamplerChoice::Auto, 200);
  omp_set_num_threads(4);
  const auto b = sample_sums(g, p, 64, 123, SamplerChoice::Auto, 200);
  omp_set_num_threads(saved);
  EXPECT_EQ(a, b);
}

TEST(ConditionDReport, IndependentSpins) {
  const auto r = condition_d_report(build_lattice(2, 4), 0.0);
  EXPECT_NEAR(r.constants.covrow, 1.0, 1e-12);
  EXPECT_NEAR(r.variance_bound, 16.0, 1e-10);
  const auto chain = condition_d_report(build_lattice(1, 16), 1.0);
  const double t = std::tanh(1.0);
  EXPECT_LT(chain.constants.covrow, (1 + t) / (1 - t) + 1);
}

TEST(CriticalBeta, KnownValues) {
  EXPECT_DOUBLE_EQ(critical_beta::curie_weiss(), 1.0);
  EXPECT_NEAR(critical_beta::square_lattice(), 0.4406867935097715, 1e-14);
  EXPECT_NEAR(critical_beta::erdos_renyi(1.0), std::atanh(0.5), 1e-15);
  const double bt = critical_beta::regular_tree(3);
  EXPECT_NEAR(2 * std::tanh(bt / 3), 1.0, 1e-12);
  EXPECT_THROW(critical_beta::erdos_renyi(0.4), ParameterError);
}

TEST(CriticalScaling, IndependentControlAndSymmetry) {
  CriticalScalingSpec spec;
  spec.sides = {8, 16, 32};
  spec.beta = 0.0;
  spec.sweeps = 400;
  spec.burn_in = 10;
  spec.field_grid = {0.0, 0.05};
  const auto r = critical_scaling_experiment(spec);
  ASSERT_EQ(r.sizes.size(), 3u);
  EXPECT_NEAR(r.alpha_side, 2.0, 0.1);
  EXPECT_NEAR(r.alpha_volume, r.alpha_side / 2, 1e-12);
  ASSERT_EQ(r.field.size(), 2u);
  EXPECT_NEAR(r.field[0].mean_sum, 0.0, 3 * r.field[0].se + 1e-12);
  EXPECT_GT(r.field[1].mean_sum, 0.0);
  spec.d = 3;
  EXPECT_THROW(critical_scaling_experiment(spec), UnsupportedError);
}
