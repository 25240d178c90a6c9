#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "spinlab/decay.hpp"
#include "spinlab/error.hpp"
#include "spinlab/exact.hpp"

using namespace spinlab;

TEST(DecayFit, SyntheticExponential) {
  TwoPointTable t;
  for (int d = 1; d <= 8; ++d) t.push_back({d, 2.0 * std::exp(-0.5 * d), 0.0, 10});
  const auto f = fit_decay_rate(t);
  EXPECT_NEAR(f.rate, 0.5, 1e-9);
  EXPECT_NEAR(f.intercept, std::log(2.0), 1e-9);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_EQ(f.used, 8u);
}

TEST(DecayFit, ChainCovarianceGivesLogTanh) {
  // Exact covariances along an open chain decay as tanh(β)^d.
  const double beta = 0.8;
  const auto g = build_lattice(1, 16);
  const auto m = exact_moments(g, IsingParams::zero_field(16, beta));
  TwoPointTable t;
  for (int d = 1; d <= 6; ++d) t.push_back({d, m.cov(4, static_cast<Vertex>(4 + d)), 0.0, 1});
  EXPECT_NEAR(fit_decay_rate(t).rate, -std::log(std::tanh(beta)), 1e-9);
}

TEST(DecayFit, NoisyRowsAreDropped) {
  TwoPointTable t;
  for (int d = 1; d <= 4; ++d) t.push_back({d, std::exp(-1.0 * d), 1e-4, 1});
  t.push_back({5, 1e-3, 1e-3, 1});   // below 3·se
  t.push_back({6, -1e-3, 1e-4, 1});  // negative
  const auto f = fit_decay_rate(t);
  EXPECT_EQ(f.used, 4u);
  EXPECT_NEAR(f.rate, 1.0, 1e-9);
  t.erase(t.begin());
  EXPECT_THROW(fit_decay_rate(t), DegenerateError);
}

TEST(DecayTrend, Monotone) {
  TwoPointTable t;
  for (int d = 1; d <= 10; ++d) t.push_back({d, 1.0 / d, 0.0, 1});
  const auto r = decay_trend(t);
  EXPECT_NEAR(r.rho, -1.0, 1e-12);
  EXPECT_LT(r.p_value, 0.01);
  std::ostringstream out;
  write_two_point_csv(out, t);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "distance,cov,se,pairs");
}

TEST(TwoPoint, IndependentSpinsHaveNoCorrelation) {
  TwoPointSpec spec;
  spec.sweeps = 400;
  spec.replicas = 8;
  const auto t = measure_two_point(build_lattice(2, 16), 0.0, Boundary::Free, spec);
  ASSERT_EQ(t.size(), 4u);
  for (const auto& r : t) {
    EXPECT_GT(r.pairs, 0u);
    EXPECT_NEAR(r.cov, 0.0, 3 * r.se + 1e-12);
  }
}

TEST(TwoPoint, ChainMatchesExact) {
  const double beta = 0.5;
  TwoPointSpec spec;
  spec.sweeps = 4000;
  spec.replicas = 8;
  spec.max_distance = 4;
  spec.margin = 0.0;
  const auto t = measure_two_point(build_lattice(1, 40), beta, Boundary::Free, spec);
  for (const auto& r : t) EXPECT_NEAR(r.cov, std::pow(std::tanh(beta), r.distance), 4 * r.se + 1e-3);
}

TEST(TwoPoint, PlusBoundaryMatchesExactOnSmallBox) {
  const double beta = 0.5;
  const auto g = build_lattice(2, 5);
  TwoPointSpec spec;
  spec.sweeps = 20000;
  spec.replicas = 8;
  spec.max_distance = 2;
  spec.margin = 0.1;
  const auto t = measure_two_point(g, beta, Boundary::Plus, spec);
  const auto m = exact_moments(g, IsingParams::zero_field(25, beta, Boundary::Plus));
  // Endpoints in [1, 3] on each axis; average exact covariances the same way.
  for (const auto& r : t) {
    double sum = 0;
    int count = 0;
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b + r.distance <= 3; ++b) {
        sum += m.cov(g.at(std::array{a, b}), g.at(std::array{a, b + r.distance}));
        sum += m.cov(g.at(std::array{b, a}), g.at(std::array{b + r.distance, a}));
        count += 2;
      }
    EXPECT_NEAR(r.cov, sum / count, 4 * r.se + 2e-3) << r.distance;
  }
}

TEST(TwoPoint, WeakerCouplingDecaysFaster) {
  TwoPointSpec spec;
  spec.sweeps = 1500;
  spec.replicas = 8;
  const auto g = build_lattice(2, 32);
  const auto a = fit_decay_rate(measure_two_point(g, 0.2, Boundary::Free, spec));
  const auto b = fit_decay_rate(measure_two_point(g, 0.35, Boundary::Free, spec));
  EXPECT_GT(a.rate, b.rate);
}

TEST(TwoPoint, Rejections) {
  EXPECT_THROW(measure_two_point(build_curie_weiss(10), 0.3, Boundary::Free), ParameterError);
  EXPECT_THROW(measure_two_point(build_lattice(2, 8), -0.3, Boundary::Free), ParameterError);
  EXPECT_THROW(measure_two_point(build_lattice(2, 8), 0.3, Boundary::Minus), UnsupportedError);
}
