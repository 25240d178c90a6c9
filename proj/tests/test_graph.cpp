#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "spinlab/error.hpp"
#include "spinlab/graph.hpp"

using namespace spinlab;

TEST(Lattice, SquareBoxCounts) {
  const auto g = build_lattice(2, 3);
  EXPECT_EQ(g.size(), 9u);
  EXPECT_EQ(g.edge_count(), 12u);
  EXPECT_EQ(g.boundary().size(), 8u);
  EXPECT_FALSE(g.is_boundary(4));
  EXPECT_EQ(g.degree(4), 4u);
  EXPECT_DOUBLE_EQ(g.max_row_sum(), 4.0);
}

TEST(Lattice, CoordinatesRoundTrip) {
  const auto g = build_lattice(3, 4);
  for (Vertex v = 0; v < static_cast<Vertex>(g.size()); ++v) EXPECT_EQ(g.at(g.coords(v)), v);
  // First coordinate most significant.
  EXPECT_EQ(g.coords(16)[0], 1);
  EXPECT_EQ(g.coords(16)[2], 0);
}

TEST(Lattice, ChainIsPath) {
  const auto g = build_lattice(1, 5);
  EXPECT_EQ(g.edge_count(), 4u);
  EXPECT_EQ(graph_distance(g, 0, 4), 4u);
  ASSERT_EQ(g.boundary().size(), 2u);
}

TEST(CurieWeiss, CompleteWithWeightOneOverN) {
  const auto g = build_curie_weiss(6);
  EXPECT_EQ(g.edge_count(), 15u);
  EXPECT_DOUBLE_EQ(g.coupling(0, 5), 1.0 / 6.0);
  EXPECT_NEAR(g.max_row_sum(), 5.0 / 6.0, 1e-15);
  EXPECT_TRUE(g.boundary().empty());
  EXPECT_THROW(build_curie_weiss(1), ParameterError);
}

TEST(ErdosRenyi, DeterministicInSeed) {
  const auto a = build_erdos_renyi(500, 2.0, 11);
  const auto b = build_erdos_renyi(500, 2.0, 11);
  const auto c = build_erdos_renyi(500, 2.0, 12);
  ASSERT_EQ(a.edge_count(), b.edge_count());
  for (std::size_t e = 0; e < a.edge_count(); ++e) {
    EXPECT_EQ(a.edges()[e].i, b.edges()[e].i);
    EXPECT_EQ(a.edges()[e].j, b.edges()[e].j);
  }
  EXPECT_NE(a.edge_count(), c.edge_count());
}

TEST(ErdosRenyi, MeanDegreeAndIsolatedFraction) {
  const std::size_t n = 20000;
  const auto g = build_erdos_renyi(n, 1.0, 3);
  // E|E| = C(n,2)/n ≈ n/2, sd ≈ sqrt(n/2).
  EXPECT_NEAR(static_cast<double>(g.edge_count()), (n - 1) / 2.0, 5 * std::sqrt(n / 2.0));
  const double iso = static_cast<double>(isolated_vertices(g).size()) / n;
  EXPECT_NEAR(iso, std::exp(-1.0), 0.02);
  for (const Edge& e : g.edges()) EXPECT_DOUBLE_EQ(e.weight, 1.0);
}

TEST(ErdosRenyi, RejectsBadLambda) {
  EXPECT_THROW(build_erdos_renyi(10, 0.0, 1), ParameterError);
  EXPECT_THROW(build_erdos_renyi(10, 10.0, 1), ParameterError);
}

TEST(RegularTree, SizesAndDistances) {
  const auto g = build_regular_tree(3, 3);
  // 1 + 3 + 6 + 12
  EXPECT_EQ(g.size(), 22u);
  EXPECT_EQ(g.edge_count(), 21u);
  EXPECT_EQ(g.degree(0), 3u);
  EXPECT_EQ(g.degree(1), 3u);
  EXPECT_DOUBLE_EQ(g.coupling(0, 1), 1.0 / 3.0);
  const auto d = bfs_distances(g, 0);
  EXPECT_EQ(d[21], 3u);
}

TEST(InteractionGraph, ValidatesEdges) {
  EXPECT_THROW(build_custom(3, {{0, 0, 1.0}}), ParameterError);
  EXPECT_THROW(build_custom(3, {{0, 1, -0.5}}), ParameterError);
  EXPECT_THROW(build_custom(3, {{0, 1, 1.0}, {1, 0, 2.0}}), ParameterError);
  EXPECT_THROW(build_custom(3, {{0, 3, 1.0}}), ParameterError);
  const auto g = build_custom(3, {{2, 1, 0.5}, {0, 1, 0.0}});
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.edges()[0].i, 1);
  EXPECT_DOUBLE_EQ(g.coupling(2, 1), 0.5);
  EXPECT_DOUBLE_EQ(g.coupling(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(g.sum_squared_couplings(), 0.5);
}

TEST(InteractionGraph, IsolatedAndUnreachable) {
  const auto g = build_custom(4, {{0, 1, 1.0}});
  const auto iso = isolated_vertices(g);
  ASSERT_EQ(iso.size(), 2u);
  EXPECT_EQ(graph_distance(g, 0, 3), kInfiniteDistance);
}

TEST(EdgeList, RoundTrip) {
  const auto g = build_erdos_renyi(50, 3.0, 5);
  std::stringstream ss;
  write_edge_list(ss, g);
  const auto h = read_edge_list(ss);
  ASSERT_EQ(h.size(), g.size());
  ASSERT_EQ(h.edge_count(), g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) EXPECT_DOUBLE_EQ(h.edges()[e].weight, g.edges()[e].weight);
}

TEST(EdgeList, CommentsAndErrors) {
  std::istringstream ok("# test\nn=3\n\n0 1 0.25\n1 2 1\n");
  EXPECT_EQ(read_edge_list(ok).edge_count(), 2u);
  std::istringstream bad("n=3\n0 1 x\n");
  EXPECT_THROW(read_edge_list(bad), Error);
  std::istringstream noheader("0 1 1\n");
  EXPECT_THROW(read_edge_list(noheader), Error);
}

TEST(Lattice, SmallBoxes) {
  const auto chain = build_lattice(1, 3);
  ASSERT_EQ(chain.boundary().size(), 2u);
  EXPECT_EQ(chain.boundary()[0], 0);
  EXPECT_EQ(chain.boundary()[1], 2);
  const auto sq = build_lattice(2, 2);
  EXPECT_EQ(sq.edge_count(), 4u);
  EXPECT_EQ(sq.boundary().size(), 4u);
  const auto four = build_lattice(2, 4);
  EXPECT_EQ(four.size(), 16u);
  EXPECT_EQ(four.edge_count(), 24u);
  EXPECT_EQ(four.boundary().size(), 12u);
  EXPECT_THROW(build_lattice(4, 100), SizeError);
}

TEST(Lattice, DistanceIsL1) {
  for (int d = 1; d <= 3; ++d)
    for (int side = 2; side <= (d == 3 ? 4 : 6); ++side) {
      const auto g = build_lattice(d, side);
      for (Vertex i = 0; i < static_cast<Vertex>(g.size()); ++i) {
        const auto dist = bfs_distances(g, i);
        for (Vertex j = 0; j < static_cast<Vertex>(g.size()); ++j) {
          std::size_t l1 = 0;
          for (int k = 0; k < d; ++k) l1 += std::abs(g.coords(i)[k] - g.coords(j)[k]);
          ASSERT_EQ(dist[j], l1);
        }
      }
      EXPECT_LE(g.max_row_sum(), 2.0 * d);
    }
  const auto g = build_lattice(2, 5);
  const int a[2] = {0, 0}, b[2] = {2, 3};
  EXPECT_EQ(graph_distance(g, g.at(a), g.at(b)), 5u);
  EXPECT_EQ(graph_distance(g, 7, 7), 0u);
}

TEST(CurieWeiss, SmallCases) {
  const auto two = build_curie_weiss(2);
  ASSERT_EQ(two.edge_count(), 1u);
  EXPECT_DOUBLE_EQ(two.coupling(0, 1), 0.5);
  const auto four = build_curie_weiss(4);
  EXPECT_EQ(four.edge_count(), 6u);
  for (const Edge& e : four.edges()) EXPECT_DOUBLE_EQ(e.weight, 0.25);
  const auto hundred = build_curie_weiss(100);
  for (Vertex v : {0, 50, 99}) EXPECT_NEAR(hundred.row_sum(v), 0.99, 1e-12);
  EXPECT_TRUE(isolated_vertices(build_curie_weiss(3)).empty());
}

TEST(ErdosRenyi, LargeGraphIsolatedFraction) {
  const auto g = build_erdos_renyi(10000, 1.0, 2024);
  const double iso = isolated_vertices(g).size() / 10000.0;
  EXPECT_GE(iso, 0.30);
  EXPECT_LE(iso, 0.45);
  std::size_t dmax = 0;
  for (Vertex v = 0; v < 10000; ++v) dmax = std::max(dmax, g.degree(v));
  EXPECT_LE(g.max_row_sum(), static_cast<double>(dmax) / 1.0 + 1e-12);
  const auto a = build_erdos_renyi(5, 1.0, 8), b = build_erdos_renyi(5, 1.0, 8);
  ASSERT_EQ(a.edge_count(), b.edge_count());
}

TEST(RegularTree, SmallCases) {
  const auto bin = build_regular_tree(2, 3);
  // Root has 2 children, everyone else 1: two paths of length 3.
  EXPECT_EQ(bin.size(), 7u);
  EXPECT_EQ(bin.degree(0), 2u);
  const auto t = build_regular_tree(3, 2);
  EXPECT_EQ(t.size(), 10u);
  for (const Edge& e : t.edges()) EXPECT_DOUBLE_EQ(e.weight, 1.0 / 3.0);
}

TEST(InteractionGraph, OneEdgeIsolated) {
  const auto g = build_custom(3, {{0, 1, 1.0}});
  const auto iso = isolated_vertices(g);
  ASSERT_EQ(iso.size(), 1u);
  EXPECT_EQ(iso[0], 2);
}
