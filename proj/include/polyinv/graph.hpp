#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace polyinv {

/// Undirected edge between 0-based vertices, stored with i < j.
struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Loopless simple graph on n labeled vertices. Describes the off-diagonal
/// zero/nonzero pattern of one symmetric coefficient matrix.
///
/// Vertices are 0-based inside the library. The 1-based convention of the
/// text and JSON formats is converted in `from_one_based` and `parse_graph`.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n);

  /// Edges may be given in either orientation and any order; they are stored
  /// canonically (i < j, lexicographic). Throws Error(InvalidInput) on a
  /// self-loop, an out-of-range vertex or a duplicate edge.
  Graph(std::size_t n, std::vector<Edge> edges);

  static Graph from_one_based(std::size_t n,
                              const std::vector<std::pair<long long, long long>>& pairs);
  static Graph path(std::size_t n);
  static Graph complete(std::size_t n);

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(std::size_t i, std::size_t j) const;

  /// Position of {i,j} in the canonical edge order, or edge_count() if absent.
  std::size_t edge_index(std::size_t i, std::size_t j) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

enum class SlotKind { Diagonal, OffDiagonal };

/// One free entry of the matrix of a graph: the diagonal entry (i,i), or
/// the symmetric pair (i,j),(j,i) of an edge. `coefficient` is the power s
/// of z the entry multiplies.
struct PatternSlot {
  std::size_t coefficient = 0;
  SlotKind kind = SlotKind::Diagonal;
  std::size_t i = 0;
  std::size_t j = 0;

  static PatternSlot diagonal(std::size_t s, std::size_t r) {
    return {s, SlotKind::Diagonal, r, r};
  }
  static PatternSlot offdiagonal(std::size_t s, std::size_t i, std::size_t j) {
    return {s, SlotKind::OffDiagonal, std::min(i, j), std::max(i, j)};
  }

  friend bool operator==(const PatternSlot&, const PatternSlot&) = default;
};

/// Diagonal slots r = 0..n-1 followed by the edges in canonical order.
std::vector<PatternSlot> pattern_slots(const Graph& g, std::size_t coefficient);

/// Parses the edge-list text format: a line `n <int>`, then one `<i> <j>`
/// pair per line with 1-based vertices. Lines starting with `#` are comments.
Graph parse_graph(std::string_view text);

/// Text form accepted by parse_graph.
std::string format_graph(const Graph& g);

/// The matrix of a graph: diag on the diagonal, offdiag[l] at both
/// positions of edge l, exact zeros elsewhere.
Eigen::MatrixXd matrix_of_graph(const Graph& g, const Eigen::VectorXd& diag,
                                const Eigen::VectorXd& offdiag);

/// Edge {i,j} present iff |A(i,j)| > zero_tol. Throws if A is not square or
/// |A(i,j) - A(j,i)| > zero_tol.
Graph graph_of_matrix(const Eigen::MatrixXd& a, double zero_tol = 0.0);

}  // namespace polyinv
