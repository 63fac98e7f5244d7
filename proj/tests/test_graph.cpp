#include <random>

#include <gtest/gtest.h>

#include "polyinv/error.hpp"
#include "polyinv/graph.hpp"
#include "support.hpp"

namespace polyinv {
namespace {

using testing::error_kind_of;

TEST(ParseGraph, PathOnFour) {
  const Graph g = parse_graph("n 4\n1 2\n2 3\n3 4\n");
  EXPECT_EQ(g.vertex_count(), 4u);
  ASSERT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g, Graph::path(4));
}

TEST(ParseGraph, EmptyGraph) {
  const Graph g = parse_graph("# diagonal matrix\nn 4\n");
  EXPECT_EQ(g.vertex_count(), 4u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(ParseGraph, GraphHCanonicalized) {
  const Graph g = parse_graph("n 4\n# H\n4 3\n1 3\n");
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edges()[0], (Edge{0, 2}));
  EXPECT_EQ(g.edges()[1], (Edge{2, 3}));
}

TEST(ParseGraph, Rejections) {
  EXPECT_EQ(error_kind_of([] { parse_graph("n 4\n2 2\n"); }), ErrorKind::InvalidInput);
  EXPECT_EQ(error_kind_of([] { parse_graph("n 4\n1 5\n"); }), ErrorKind::InvalidInput);
  EXPECT_EQ(error_kind_of([] { parse_graph("n 4\n0 1\n"); }), ErrorKind::InvalidInput);
  EXPECT_EQ(error_kind_of([] { parse_graph("n 4\n1 2\n2 1\n"); }), ErrorKind::InvalidInput);
  EXPECT_EQ(error_kind_of([] { parse_graph("1 2\n"); }), ErrorKind::Parse);
  EXPECT_EQ(error_kind_of([] { parse_graph("n 4\n1 x\n"); }), ErrorKind::Parse);
  EXPECT_EQ(error_kind_of([] { parse_graph("n 4\n1 2 3\n"); }), ErrorKind::Parse);
  EXPECT_EQ(error_kind_of([] { parse_graph(""); }), ErrorKind::Parse);
}

TEST(ParseGraph, FormatRoundTrip) {
  const Graph g = testing::graph_g();
  EXPECT_EQ(parse_graph(format_graph(g)), g);
}

TEST(Graph, EdgeIndexFollowsCanonicalOrder) {
  const Graph g = testing::graph_g();
  EXPECT_EQ(g.edge_index(0, 1), 0u);
  EXPECT_EQ(g.edge_index(2, 0), 1u);
  EXPECT_EQ(g.edge_index(1, 2), 2u);
  EXPECT_EQ(g.edge_index(3, 2), 3u);
  EXPECT_EQ(g.edge_index(0, 3), g.edge_count());
  EXPECT_TRUE(g.has_edge(3, 2));
  EXPECT_FALSE(g.has_edge(1, 3));
}

TEST(PatternSlots, DiagonalsThenEdges) {
  const auto slots = pattern_slots(testing::graph_h(), 1);
  ASSERT_EQ(slots.size(), 6u);
  EXPECT_EQ(slots[0], PatternSlot::diagonal(1, 0));
  EXPECT_EQ(slots[3], PatternSlot::diagonal(1, 3));
  EXPECT_EQ(slots[4], PatternSlot::offdiagonal(1, 2, 0));
  EXPECT_EQ(slots[5], PatternSlot::offdiagonal(1, 2, 3));
}

TEST(MatrixOfGraph, DampingPatternOfGraphH) {
  Eigen::VectorXd x(4), y(2);
  x << 1.5, 2.5, 3.5, 4.5;
  y << -0.25, 0.75;
  const Eigen::MatrixXd m = matrix_of_graph(testing::graph_h(), x, y);
  Eigen::MatrixXd expected(4, 4);
  expected << 1.5, 0, -0.25, 0,
              0, 2.5, 0, 0,
              -0.25, 0, 3.5, 0.75,
              0, 0, 0.75, 4.5;
  EXPECT_EQ(m, expected);
}

TEST(MatrixOfGraph, EmptyGraphGivesDiagonal) {
  Eigen::VectorXd d(3);
  d << 1, -2, 3;
  EXPECT_EQ(matrix_of_graph(Graph(3), d, Eigen::VectorXd(0)),
            Eigen::MatrixXd(d.asDiagonal()));
}

TEST(MatrixOfGraph, TridiagonalHalfOffDiagonals) {
  Eigen::VectorXd d(4);
  d << 6, 14, 22, 30;
  const Eigen::MatrixXd m = matrix_of_graph(Graph::path(4), d, Eigen::VectorXd::Constant(3, 0.5));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double want = i == j ? d[i] : (std::abs(i - j) == 1 ? 0.5 : 0.0);
      EXPECT_EQ(m(i, j), want) << i << "," << j;
    }
  }
}

TEST(MatrixOfGraph, LengthMismatch) {
  EXPECT_EQ(error_kind_of([] {
              matrix_of_graph(Graph::path(3), Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2));
            }),
            ErrorKind::InvalidInput);
  EXPECT_EQ(error_kind_of([] {
              matrix_of_graph(Graph::path(3), Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(3));
            }),
            ErrorKind::InvalidInput);
}

TEST(GraphOfMatrix, NetworkStiffnessHasGraphG) {
  Eigen::Matrix<double, 5, 1> k;
  k << 1.0, 2.0, 3.0, 4.0, 5.0;
  const auto mdk = testing::linked_network(Eigen::Vector4d::Ones(), Eigen::Vector3d(1, 2, 3), k);
  EXPECT_EQ(graph_of_matrix(mdk[2]), testing::graph_g());
  EXPECT_EQ(graph_of_matrix(mdk[1]), testing::graph_h());
  EXPECT_EQ(graph_of_matrix(mdk[0]), Graph(4));
}

TEST(GraphOfMatrix, SerialChainIsPath) {
  const auto mdk = testing::serial_chain(Eigen::VectorXd::Ones(4), Eigen::VectorXd::Constant(5, 0.3),
                                         Eigen::VectorXd::Constant(5, 2.0));
  EXPECT_EQ(graph_of_matrix(mdk[1]), Graph::path(4));
  EXPECT_EQ(graph_of_matrix(mdk[2]), Graph::path(4));
}

TEST(GraphOfMatrix, DiagonalIsEmpty) {
  EXPECT_EQ(graph_of_matrix(Eigen::Vector3d(1, 0, -7).asDiagonal().toDenseMatrix()), Graph(3));
}

TEST(GraphOfMatrix, ToleranceAndAsymmetry) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  a(0, 1) = a(1, 0) = 1e-14;
  EXPECT_EQ(graph_of_matrix(a).edge_count(), 1u);
  EXPECT_EQ(graph_of_matrix(a, 1e-12).edge_count(), 0u);
  a(1, 0) = 1.0;
  EXPECT_EQ(error_kind_of([&] { graph_of_matrix(a); }), ErrorKind::InvalidInput);
}

// Round trip over random graphs with nonzero off-diagonals, plus the exact
// symmetry and exact-zero invariants of matrix_of_graph.
TEST(GraphProperty, RoundTripAndExactPattern) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = size(rng);
    const Graph g = testing::random_graph(n, 0.4, rng);
    Eigen::VectorXd d(n), y(g.edge_count());
    for (auto& v : d) v = val(rng);
    for (auto& v : y) {
      do v = val(rng);
      while (v == 0.0);
    }
    const Eigen::MatrixXd m = matrix_of_graph(g, d, y);
    ASSERT_EQ(graph_of_matrix(m, 0.0), g);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        ASSERT_EQ(m(i, j), m(j, i));
        if (i != j && !g.has_edge(i, j)) ASSERT_EQ(m(i, j), 0.0);
      }
    }
  }
}

}  // namespace
}  // namespace polyinv
