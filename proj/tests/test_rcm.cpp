#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "spinlab/error.hpp"
#include "spinlab/exact.hpp"
#include "spinlab/rcm.hpp"
#include "spinlab/rng.hpp"
#include "spinlab/samplers.hpp"
#include "spinlab/stats.hpp"

using namespace spinlab;

TEST(Connectivity, TrivialCases) {
  const auto g = build_lattice(2, 3);
  const auto closed = PercolationConfig::closed(g);
  const auto xi_free = BoundaryPartition::free(g);
  const auto xi_wired = BoundaryPartition::wired(g);
  EXPECT_TRUE(connected(g, closed, xi_free, 3, 3));
  EXPECT_FALSE(connected(g, closed, xi_free, 0, 2));
  EXPECT_TRUE(connected(g, closed, xi_wired, 0, 2));
  EXPECT_FALSE(connected(g, closed, xi_wired, 0, 4));
  EXPECT_EQ(component_count(g, closed, xi_free), 9u);
  EXPECT_EQ(component_count(g, closed, xi_wired), 9u - 8u + 1u);
  EXPECT_EQ(component_count(g, PercolationConfig::full(g), xi_free), 1u);
}

TEST(Connectivity, ClusterQueries) {
  const auto g = build_lattice(1, 5);
  PercolationConfig cfg{{1, 1, 0, 1}};
  Connectivity c(g, cfg, BoundaryPartition::free(g));
  EXPECT_TRUE(c.connected(0, 2));
  EXPECT_FALSE(c.connected(2, 3));
  EXPECT_EQ(c.cluster_size(1), 3u);
  EXPECT_EQ(c.component_count(), 2u);
  EXPECT_TRUE(c.connected_to_boundary(1));
  EXPECT_EQ(cfg.open_count(), 3u);
}

TEST(BoundaryPartition, Validation) {
  const std::vector<Vertex> dom{0, 2, 4};
  EXPECT_NO_THROW(BoundaryPartition::from_blocks(dom, {{0, 4}, {2}}));
  EXPECT_THROW(BoundaryPartition::from_blocks(dom, {{0, 4}}), ParameterError);
  EXPECT_THROW(BoundaryPartition::from_blocks(dom, {{0, 4}, {4, 2}}), ParameterError);
  EXPECT_THROW(BoundaryPartition::from_blocks(dom, {{0, 2, 4}, {}}), ParameterError);
  const auto fine = BoundaryPartition::from_blocks(dom, {{0}, {2}, {4}});
  const auto mid = BoundaryPartition::from_blocks(dom, {{0, 4}, {2}});
  const auto coarse = BoundaryPartition::from_blocks(dom, {{0, 2, 4}});
  EXPECT_TRUE(fine.refines(mid));
  EXPECT_TRUE(mid.refines(coarse));
  EXPECT_FALSE(coarse.refines(mid));
}

TEST(RandomCluster, SingleEdgeByHand) {
  const auto g = build_custom(2, {{0, 1, 1.0}});
  const auto xi = BoundaryPartition::free(g);
  for (double p : {0.1, 0.5, 0.9}) EXPECT_NEAR(rc_exact_connectivity(g, p, xi, 0, 1), p / (p + 2 * (1 - p)), 1e-15);
}

TEST(RandomCluster, Limits) {
  const auto g = build_lattice(2, 3);
  const auto xi = BoundaryPartition::free(g);
  EXPECT_NEAR(rc_exact_connectivity(g, 0.0, xi, 0, 8), 0.0, 1e-15);
  EXPECT_NEAR(rc_exact_connectivity(g, 1.0, xi, 0, 8), 1.0, 1e-15);
  EXPECT_THROW(rc_exact_connectivity(g, 1.5, xi, 0, 8), ParameterError);
  const auto big = build_lattice(2, 4);
  EXPECT_THROW(rc_exact_connectivity(big, 0.5, BoundaryPartition::free(big), 0, 1), SizeError);
}

TEST(RandomCluster, EdwardsSokalOnRandomUnitGraphs) {
  Rng rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 3 + rep % 4;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (uniform01(rng) < 0.6) edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), 1.0});
    const auto g = build_custom(n, std::move(edges));
    const double p = 0.1 + 0.8 * uniform01(rng);
    const auto m = exact_moments(g, IsingParams::zero_field(n, es_beta(p), Boundary::Free));
    const auto xi = BoundaryPartition::free(g);
    for (Vertex i = 0; i < static_cast<Vertex>(n); ++i)
      for (Vertex j = i + 1; j < static_cast<Vertex>(n); ++j)
        EXPECT_NEAR(rc_exact_connectivity(g, p, xi, i, j), m.second(i, j), 1e-12);
  }
}

TEST(RandomCluster, WiredMatchesPlusBoundary) {
  const auto g = build_lattice(2, 3);
  const double p = 0.55;
  const auto plus = exact_moments(g, IsingParams::zero_field(9, es_beta(p), Boundary::Plus));
  const auto xi = BoundaryPartition::wired(g);
  for (Vertex i = 0; i < 9; ++i) EXPECT_NEAR(rc_exact_boundary_connectivity(g, p, xi, i), plus.means[i], 1e-12);
  // Two-point function under plus boundary: E+[X_i X_j] = φ^w(i ↔ j).
  const auto line = build_lattice(1, 6);
  const auto pl = exact_moments(line, IsingParams::zero_field(6, es_beta(p), Boundary::Plus));
  const auto xl = BoundaryPartition::wired(line);
  EXPECT_NEAR(rc_exact_connectivity(line, p, xl, 2, 3), pl.second(2, 3), 1e-12);
  EXPECT_NEAR(rc_exact_connectivity(line, p, xl, 1, 4), pl.second(1, 4), 1e-12);
}

TEST(RandomCluster, MonotoneInP) {
  const auto g = build_lattice(2, 3);
  const auto xi = BoundaryPartition::free(g);
  double prev = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const double v = rc_exact_connectivity(g, k / 10.0, xi, 0, 8);
    EXPECT_GE(v, prev - 1e-15);
    prev = v;
  }
}

TEST(RandomCluster, PmfNormalizedAndPositive) {
  const auto g = build_lattice(2, 3);
  const std::vector<double> ep(g.edge_count(), 0.3);
  for (double q : {1.0, 2.0, 3.0}) {
    const auto pmf = rc_pmf(g, ep, q, BoundaryPartition::free(g));
    EXPECT_EQ(pmf.size(), std::size_t{1} << g.edge_count());
    EXPECT_NEAR(std::accumulate(pmf.begin(), pmf.end(), 0.0), 1.0, 1e-12);
  }
  // q = 1 is Bernoulli percolation.
  const auto pmf = rc_pmf(g, ep, 1.0, BoundaryPartition::free(g));
  EXPECT_NEAR(pmf[0], std::pow(0.7, 12), 1e-15);
}

TEST(RandomCluster, BoundaryMonotonicity) {
  const auto g = build_lattice(2, 2);
  const auto fine = BoundaryPartition::free(g), coarse = BoundaryPartition::wired(g);
  const auto r = check_boundary_monotonicity(g, 0.5, coarse, fine, 0, 3);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.fine, r.coarse);
  const auto same = check_boundary_monotonicity(g, 0.5, fine, fine, 0, 3);
  EXPECT_DOUBLE_EQ(same.fine, same.coarse);
  const auto big = build_lattice(2, 3);
  const auto zero = check_boundary_monotonicity(big, 0.0, BoundaryPartition::wired(big), BoundaryPartition::free(big), 4, 1);
  EXPECT_DOUBLE_EQ(zero.fine, 0.0);
  EXPECT_DOUBLE_EQ(zero.coarse, 0.0);
  EXPECT_THROW(check_boundary_monotonicity(g, 0.5, fine, coarse, 0, 3), ParameterError);
}

TEST(RandomCluster, DomainMarkov) {
  const auto tri = build_custom(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  const auto xi = BoundaryPartition::free(tri);
  const std::vector<std::size_t> one{0};
  for (std::uint8_t a : {0, 1})
    for (std::uint8_t b : {0, 1}) {
      const std::vector<std::uint8_t> psi{a, b};
      const auto r = check_domain_markov(tri, one, 0.4, xi, psi);
      EXPECT_LE(r.total_variation, 1e-10);
      EXPECT_TRUE(r.holds);
    }
  const std::vector<std::size_t> all{0, 1, 2};
  EXPECT_LE(check_domain_markov(tri, all, 0.4, xi, {}).total_variation, 1e-15);
  const std::vector<std::uint8_t> closed{0, 0};
  EXPECT_LE(check_domain_markov(tri, one, 0.0, xi, closed).total_variation, 1e-15);

  // Lattice with a wired boundary and a two-edge window in the middle.
  const auto g = build_lattice(2, 3);
  const auto w = BoundaryPartition::wired(g);
  const std::vector<std::size_t> window{3, 5};
  Rng rng(2);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<std::uint8_t> psi(g.edge_count() - window.size());
    for (auto& s : psi) s = coin(rng);
    EXPECT_TRUE(check_domain_markov(g, window, 0.6, w, psi).holds);
  }
}

TEST(EdwardsSokal, ZeroCouplingOpensNothing) {
  const auto g = build_lattice(2, 3);
  Rng rng(1);
  SpinConfig x = random_config(g, Boundary::Free, rng);
  const auto bonds = es_joint_sample(g, IsingParams::zero_field(9, 0.0, Boundary::Free), x, rng);
  EXPECT_EQ(bonds.open_count(), 0u);
  EXPECT_THROW(es_joint_sample(g, IsingParams::uniform_field(9, 0.3, 0.1), x, rng), ParameterError);
}

TEST(EdwardsSokal, BondMarginalMatchesRandomCluster) {
  // 4-cycle plus chord: 5 edges, 32 bond configurations.
  const auto g = build_custom(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}, {0, 2, 1.0}});
  const double beta = 0.5;
  const std::vector<double> ep(5, es_bond_probability(beta));
  const auto pmf = rc_pmf(g, ep, 2.0, BoundaryPartition::free(g));
  std::vector<std::size_t> counts(pmf.size(), 0);
  Rng rng(6);
  const auto p = IsingParams::zero_field(4, beta, Boundary::Free);
  SpinConfig x = random_config(g, Boundary::Free, rng);
  for (int t = 0; t < 200; ++t) es_joint_sample(g, p, x, rng);
  for (int t = 0; t < 40000; ++t) {
    const auto b = es_joint_sample(g, p, x, rng);
    std::size_t idx = 0;
    for (std::size_t e = 0; e < b.size(); ++e)
      if (b.open[e]) idx |= std::size_t{1} << e;
    ++counts[idx];
  }
  // Successive bond layers are correlated, hence the loose threshold.
  EXPECT_GT(stats::chi_square_gof(counts, pmf).p_value, 1e-6);
}

TEST(EdwardsSokal, EmpiricalConnectivityOnBox) {
  const auto g = build_lattice(2, 3);
  const double beta = 0.4, p = es_bond_probability(beta);
  for (Boundary b : {Boundary::Free, Boundary::Plus}) {
    const auto params = IsingParams::zero_field(9, beta, b);
    const auto xi = b == Boundary::Free ? BoundaryPartition::free(g) : BoundaryPartition::wired(g);
    const double exact_pair = rc_exact_connectivity(g, p, xi, 0, 8);
    const double exact_bnd = b == Boundary::Plus ? exact_moments(g, params).means[4] : 0.0;
    Rng rng(40 + static_cast<int>(b));
    SpinConfig x = random_config(g, b, rng);
    std::vector<double> pair, bnd;
    for (int t = 0; t < 100000; ++t) {
      const auto bonds = es_joint_sample(g, params, x, rng);
      Connectivity c(g, bonds, xi);
      pair.push_back(c.connected(0, 8));
      if (b == Boundary::Plus) bnd.push_back(c.connected_to_boundary(4));
    }
    const auto ms = stats::batch_means(pair, 50);
    EXPECT_NEAR(ms.mean, exact_pair, 4 * ms.se);
    if (b == Boundary::Plus) {
      const auto mb = stats::batch_means(bnd, 50);
      EXPECT_NEAR(mb.mean, exact_bnd, 4 * mb.se);
    }
  }
}
