#include "polyinv/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "polyinv/error.hpp"

namespace polyinv {

Graph::Graph(std::size_t n) : n_(n) {}

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
  for (auto& e : edges) {
    if (e.i == e.j) {
      throw Error(ErrorKind::InvalidInput,
                  "self-loop at vertex " + std::to_string(e.i + 1));
    }
    if (e.i >= n || e.j >= n) {
      throw Error(ErrorKind::InvalidInput,
                  "edge {" + std::to_string(e.i + 1) + "," + std::to_string(e.j + 1) +
                      "} has a vertex outside 1.." + std::to_string(n));
    }
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges.begin(), edges.end());
  auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end()) {
    throw Error(ErrorKind::InvalidInput,
                "duplicate edge {" + std::to_string(dup->i + 1) + "," +
                    std::to_string(dup->j + 1) + "}");
  }
  edges_ = std::move(edges);
}

Graph Graph::from_one_based(std::size_t n,
                            const std::vector<std::pair<long long, long long>>& pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [a, b] : pairs) {
    if (a < 1 || b < 1 || a > static_cast<long long>(n) || b > static_cast<long long>(n)) {
      throw Error(ErrorKind::InvalidInput,
                  "edge {" + std::to_string(a) + "," + std::to_string(b) +
                      "} has a vertex outside 1.." + std::to_string(n));
    }
    edges.push_back({static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1)});
  }
  return Graph(n, std::move(edges));
}

Graph Graph::path(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph(n, std::move(edges));
}

Graph Graph::complete(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j});
  return Graph(n, std::move(edges));
}

std::size_t Graph::edge_index(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const Edge key{i, j};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return edges_.size();
  return static_cast<std::size_t>(it - edges_.begin());
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  return edge_index(i, j) != edges_.size();
}

std::vector<PatternSlot> pattern_slots(const Graph& g, std::size_t coefficient) {
  std::vector<PatternSlot> slots;
  slots.reserve(g.vertex_count() + g.edge_count());
  for (std::size_t r = 0; r < g.vertex_count(); ++r)
    slots.push_back(PatternSlot::diagonal(coefficient, r));
  for (const auto& e : g.edges())
    slots.push_back(PatternSlot::offdiagonal(coefficient, e.i, e.j));
  return slots;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t\r", pos);
    if (start == std::string_view::npos) break;
    auto end = s.find_first_of(" \t\r", start);
    if (end == std::string_view::npos) end = s.size();
    out.push_back(s.substr(start, end - start));
    pos = end;
  }
  return out;
}

long long parse_int(std::string_view token, std::size_t line) {
  long long value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": expected an integer, got '" +
                                      std::string(token) + "'");
  }
  return value;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::optional<long long> n;
  std::vector<std::pair<long long, long long>> pairs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto tokens = split_ws(line);
    if (!n) {
      if (tokens.size() != 2 || tokens[0] != "n") {
        throw Error(ErrorKind::Parse,
                    "line " + std::to_string(line_no) + ": expected header 'n <int>'");
      }
      n = parse_int(tokens[1], line_no);
      if (*n < 1) {
        throw Error(ErrorKind::InvalidInput,
                    "line " + std::to_string(line_no) + ": vertex count must be positive");
      }
      continue;
    }
    if (tokens.size() != 2) {
      throw Error(ErrorKind::Parse,
                  "line " + std::to_string(line_no) + ": expected an edge '<i> <j>'");
    }
    pairs.emplace_back(parse_int(tokens[0], line_no), parse_int(tokens[1], line_no));
  }
  if (!n) throw Error(ErrorKind::Parse, "missing header 'n <int>'");
  return Graph::from_one_based(static_cast<std::size_t>(*n), pairs);
}

std::string format_graph(const Graph& g) {
  std::ostringstream out;
  out << "n " << g.vertex_count() << '\n';
  for (const auto& e : g.edges()) out << e.i + 1 << ' ' << e.j + 1 << '\n';
  return out.str();
}

Eigen::MatrixXd matrix_of_graph(const Graph& g, const Eigen::VectorXd& diag,
                                const Eigen::VectorXd& offdiag) {
  const auto n = g.vertex_count();
  if (static_cast<std::size_t>(diag.size()) != n) {
    throw Error(ErrorKind::InvalidInput, "diagonal has length " + std::to_string(diag.size()) +
                                             ", graph has " + std::to_string(n) + " vertices");
  }
  if (static_cast<std::size_t>(offdiag.size()) != g.edge_count()) {
    throw Error(ErrorKind::InvalidInput,
                "off-diagonal vector has length " + std::to_string(offdiag.size()) +
                    ", graph has " + std::to_string(g.edge_count()) + " edges");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m.diagonal() = diag;
  for (std::size_t l = 0; l < g.edge_count(); ++l) {
    const auto& e = g.edges()[l];
    m(e.i, e.j) = offdiag[l];
    m(e.j, e.i) = offdiag[l];
  }
  return m;
}

Graph graph_of_matrix(const Eigen::MatrixXd& a, double zero_tol) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidInput, "matrix is not square");
  const auto n = static_cast<std::size_t>(a.rows());
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(std::abs(a(i, j) - a(j, i)) <= zero_tol)) {
        throw Error(ErrorKind::InvalidInput, "matrix is not symmetric at (" +
                                                 std::to_string(i + 1) + "," +
                                                 std::to_string(j + 1) + ")");
      }
      if (std::abs(a(i, j)) > zero_tol) edges.push_back({i, j});
    }
  }
  return Graph(n, std::move(edges));
}

}  // namespace polyinv
