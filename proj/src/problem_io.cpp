#include "polyinv/problem_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "polyinv/error.hpp"

namespace polyinv {

namespace {

[[noreturn]] void field_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Parse, where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) field_error(where, std::string("missing field '") + key + "'");
  return *it;
}

double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) field_error(where, "expected a number");
  return j.get<double>();
}

std::size_t as_count(const json& j, const std::string& where) {
  if (!j.is_number_integer()) field_error(where, "expected an integer");
  const auto v = j.get<long long>();
  if (v < 0) throw Error(ErrorKind::InvalidInput, where + ": must not be negative");
  return static_cast<std::size_t>(v);
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) field_error(where, "unknown field '" + it.key() + "'");
  }
}

Graph graph_from_json(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_object()) field_error(where, "expected an object with 'edges' or 'edge_list'");
  reject_unknown(j, {"edges", "edge_list"}, where);
  if (j.contains("edge_list")) {
    if (j.contains("edges")) field_error(where, "give either 'edges' or 'edge_list', not both");
    if (!j["edge_list"].is_string()) field_error(where + ".edge_list", "expected a string");
    Graph g;
    try {
      g = parse_graph(j["edge_list"].get<std::string>());
    } catch (const Error& e) {
      throw Error(e.kind(), where + ".edge_list: " + e.what());
    }
    if (g.vertex_count() != n) {
      throw Error(ErrorKind::InvalidInput, where + ".edge_list: declares " +
                                               std::to_string(g.vertex_count()) +
                                               " vertices, problem has n = " + std::to_string(n));
    }
    return g;
  }
  const json& edges = require(j, "edges", where);
  if (!edges.is_array()) field_error(where + ".edges", "expected an array of [i, j] pairs");
  std::vector<std::pair<long long, long long>> pairs;
  for (std::size_t l = 0; l < edges.size(); ++l) {
    const auto at = where + ".edges[" + std::to_string(l) + "]";
    const json& e = edges[l];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      field_error(at, "expected a pair of integers");
    }
    pairs.emplace_back(e[0].get<long long>(), e[1].get<long long>());
  }
  try {
    return Graph::from_one_based(n, pairs);
  } catch (const Error& e) {
    throw Error(e.kind(), where + ": " + e.what());
  }
}

json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.i + 1, e.j + 1});
  return {{"edges", edges}};
}

SolverControls controls_from_json(const json& j, const std::string& where) {
  SolverControls c;
  if (!j.is_object()) field_error(where, "expected an object");
  reject_unknown(j,
                 {"newton_tol", "max_iter", "continuation_steps", "max_continuation_steps",
                  "damping", "max_halvings", "jacobian", "fd_step", "grouping",
                  "grouping_fallback", "real_tol", "sep_tol_rel"},
                 where);
  if (j.contains("newton_tol") && !j["newton_tol"].is_null())
    c.newton_tol = as_double(j["newton_tol"], where + ".newton_tol");
  if (j.contains("max_iter")) c.max_iter = as_count(j["max_iter"], where + ".max_iter");
  if (j.contains("continuation_steps"))
    c.continuation_steps = as_count(j["continuation_steps"], where + ".continuation_steps");
  if (j.contains("max_continuation_steps"))
    c.max_continuation_steps =
        as_count(j["max_continuation_steps"], where + ".max_continuation_steps");
  if (j.contains("damping")) c.damping = as_double(j["damping"], where + ".damping");
  if (j.contains("max_halvings"))
    c.max_halvings = as_count(j["max_halvings"], where + ".max_halvings");
  if (j.contains("fd_step")) c.fd_step = as_double(j["fd_step"], where + ".fd_step");
  if (j.contains("grouping_fallback")) {
    if (!j["grouping_fallback"].is_boolean())
      field_error(where + ".grouping_fallback", "expected true or false");
    c.grouping_fallback = j["grouping_fallback"].get<bool>();
  }
  if (j.contains("real_tol")) c.spectrum.real_tol = as_double(j["real_tol"], where + ".real_tol");
  if (j.contains("sep_tol_rel"))
    c.spectrum.sep_tol_rel = as_double(j["sep_tol_rel"], where + ".sep_tol_rel");
  if (j.contains("jacobian")) {
    const json& v = j["jacobian"];
    if (v == "analytic") {
      c.jacobian = JacobianSource::Analytic;
    } else if (v == "fd") {
      c.jacobian = JacobianSource::FiniteDifference;
    } else {
      field_error(where + ".jacobian", "expected \"analytic\" or \"fd\"");
    }
  }
  if (j.contains("grouping")) {
    const json& v = j["grouping"];
    const auto g = v.is_string() ? grouping_from_string(v.get<std::string>()) : std::nullopt;
    if (!g) field_error(where + ".grouping", "expected \"input\", \"ascending\" or \"interleaved\"");
    c.grouping = *g;
  }
  if (!(c.fd_step > 0.0)) throw Error(ErrorKind::InvalidInput, where + ".fd_step: must be positive");
  if (!(c.spectrum.real_tol >= 0.0) || !(c.spectrum.sep_tol_rel >= 0.0)) {
    throw Error(ErrorKind::InvalidInput, where + ": spectrum tolerances must be nonnegative");
  }
  if (c.max_continuation_steps < c.continuation_steps) {
    throw Error(ErrorKind::InvalidInput,
                where + ": max_continuation_steps must be at least continuation_steps");
  }
  return c;
}

json controls_to_json(const ProblemSpec& spec) {
  const auto& c = spec.controls();
  return {{"newton_tol", spec.newton_tol()},
          {"max_iter", c.max_iter},
          {"continuation_steps", c.continuation_steps},
          {"max_continuation_steps", c.max_continuation_steps},
          {"damping", c.damping},
          {"max_halvings", c.max_halvings},
          {"jacobian", c.jacobian == JacobianSource::Analytic ? "analytic" : "fd"},
          {"fd_step", c.fd_step},
          {"grouping", to_string(c.grouping)},
          {"grouping_fallback", c.grouping_fallback},
          {"real_tol", c.spectrum.real_tol},
          {"sep_tol_rel", c.spectrum.sep_tol_rel}};
}

}  // namespace

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) field_error(where, "expected an array of rows");
  const auto rows = j.size();
  const auto cols = rows ? (j[0].is_array() ? j[0].size() : 0) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto at = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) field_error(at, "rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = as_double(j[r][c], at + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) field_error(where, "expected an array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v[i] = as_double(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

ProblemSpec problem_from_json(const json& doc) {
  const std::string root = "problem";
  if (!doc.is_object()) field_error(root, "expected a JSON object");
  reject_unknown(doc,
                 {"$schema", "description", "n", "k", "proper_values", "leading", "graphs",
                  "epsilon", "offdiag_overrides", "controls"},
                 root);
  const auto n = as_count(require(doc, "n", root), "n");
  const auto k = as_count(require(doc, "k", root), "k");
  if (n == 0 || k == 0) throw Error(ErrorKind::InvalidInput, "n and k must be positive");

  Eigen::VectorXd values = vector_from_json(require(doc, "proper_values", root), "proper_values");
  Eigen::VectorXd leading = Eigen::VectorXd::Ones(n);
  if (doc.contains("leading")) {
    leading = vector_from_json(doc["leading"], "leading");
    if (static_cast<std::size_t>(leading.size()) != n) {
      throw Error(ErrorKind::InvalidInput, "leading: expected " + std::to_string(n) +
                                               " entries, got " + std::to_string(leading.size()));
    }
  }

  const json& graphs_json = require(doc, "graphs", root);
  if (!graphs_json.is_array()) field_error("graphs", "expected an array");
  if (graphs_json.size() != k) {
    throw Error(ErrorKind::InvalidInput, "graphs: expected k = " + std::to_string(k) +
                                             " entries, got " +
                                             std::to_string(graphs_json.size()));
  }
  std::vector<Graph> graphs;
  for (std::size_t s = 0; s < k; ++s)
    graphs.push_back(graph_from_json(graphs_json[s], n, "graphs[" + std::to_string(s) + "]"));

  const double epsilon = doc.contains("epsilon") ? as_double(doc["epsilon"], "epsilon") : 0.5;

  std::vector<std::optional<Eigen::VectorXd>> overrides;
  if (doc.contains("offdiag_overrides") && !doc["offdiag_overrides"].is_null()) {
    const json& ov = doc["offdiag_overrides"];
    if (!ov.is_array()) field_error("offdiag_overrides", "expected an array");
    for (std::size_t s = 0; s < ov.size(); ++s) {
      if (ov[s].is_null()) {
        overrides.emplace_back();
      } else {
        overrides.emplace_back(
            vector_from_json(ov[s], "offdiag_overrides[" + std::to_string(s) + "]"));
      }
    }
  }

  SolverControls controls;
  if (doc.contains("controls")) controls = controls_from_json(doc["controls"], "controls");

  const double sep = controls.spectrum.sep_tol_rel;
  return ProblemSpec(TargetSpectrum(std::move(values), n, k, sep),
                     LeadingDiagonal(std::move(leading)), std::move(graphs), epsilon, controls,
                     std::move(overrides));
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

ProblemSpec load_problem(const std::filesystem::path& path) {
  return problem_from_json(read_json_file(path));
}

json problem_to_json(const ProblemSpec& spec) {
  json graphs = json::array();
  json overrides = json::array();
  for (std::size_t s = 0; s < spec.degree(); ++s) {
    graphs.push_back(graph_to_json(spec.graphs()[s]));
    overrides.push_back(vector_to_json(spec.offdiag()[s]));
  }
  return {{"n", spec.dimension()},
          {"k", spec.degree()},
          {"proper_values", vector_to_json(spec.spectrum().values())},
          {"leading", vector_to_json(spec.lead().values())},
          {"graphs", graphs},
          {"epsilon", spec.epsilon()},
          {"offdiag_overrides", overrides},
          {"controls", controls_to_json(spec)}};
}

json polynomial_to_json(const MatrixPolynomial& p) {
  json coeffs = json::array();
  for (const auto& a : p.coefficients()) coeffs.push_back(matrix_to_json(a));
  return {{"n", p.dimension()}, {"k", p.degree()}, {"coefficients", coeffs}};
}

MatrixPolynomial polynomial_from_json(const json& doc) {
  if (!doc.is_object()) field_error("polynomial", "expected a JSON object");
  const json& poly = doc.contains("polynomial") ? doc["polynomial"] : doc;
  if (!poly.is_object()) field_error("polynomial", "expected a JSON object");
  const json& coeffs = require(poly, "coefficients", "polynomial");
  if (!coeffs.is_array() || coeffs.empty()) {
    field_error("polynomial.coefficients", "expected a non-empty array of matrices");
  }
  std::vector<Eigen::MatrixXd> mats;
  for (std::size_t s = 0; s < coeffs.size(); ++s) {
    mats.push_back(
        matrix_from_json(coeffs[s], "polynomial.coefficients[" + std::to_string(s) + "]"));
  }
  MatrixPolynomial p(std::move(mats));
  if (poly.contains("k") && as_count(poly["k"], "polynomial.k") != p.degree()) {
    throw Error(ErrorKind::InvalidInput, "polynomial.k disagrees with the coefficient count");
  }
  if (poly.contains("n") && as_count(poly["n"], "polynomial.n") != p.dimension()) {
    throw Error(ErrorKind::InvalidInput, "polynomial.n disagrees with the coefficient size");
  }
  return p;
}

namespace {

json structure_to_json(const StructureVerdict& v) {
  json coeffs = json::array();
  for (bool b : v.coefficient_ok) coeffs.push_back(b);
  return {{"coefficients", coeffs}, {"leading", v.leading_ok}, {"ok", v.ok()}};
}

}  // namespace

json report_to_json(const SolveReport& report, const ProblemSpec& spec) {
  json iterations = json::array();
  for (const auto& it : report.iterations) {
    iterations.push_back({{"tau", it.tau},
                          {"iteration", it.iteration},
                          {"residual", it.residual},
                          {"step_norm", it.step_norm},
                          {"damping", it.damping}});
  }
  json path = json::array();
  for (const auto& step : report.continuation_path) {
    path.push_back(
        {{"tau", step.tau}, {"iterations", step.iterations}, {"residual", step.residual}});
  }
  return {{"config", problem_to_json(spec)},
          {"converged", report.converged()},
          {"status", report.failure ? std::string(to_string(*report.failure)) : "Converged"},
          {"message", report.message},
          {"polynomial", polynomial_to_json(report.polynomial)},
          {"x", vector_to_json(report.x)},
          {"proper_values", vector_to_json(report.proper_values)},
          {"targets_sorted", vector_to_json(spec.spectrum().sorted())},
          {"residual", report.residual},
          {"newton_tol", report.newton_tol},
          {"structure_ok", report.structure_ok},
          {"structure", structure_to_json(report.structure)},
          {"matching_fallback", report.matching_fallback},
          {"grouping", to_string(report.grouping)},
          {"iterations", iterations},
          {"continuation_path", path},
          {"tau_reached", report.tau_reached},
          {"failed_tau", report.failed_tau ? json(*report.failed_tau) : json(nullptr)}};
}

json verification_to_json(const Verification& v) {
  return {{"passed", v.passed()},
          {"residual", v.residual},
          {"tolerance", v.tolerance},
          {"spectrum_ok", v.spectrum_ok},
          {"proper_values", vector_to_json(v.proper_values)},
          {"structure", structure_to_json(v.structure)},
          {"failures", v.failures}};
}

json jacobian_to_json(const SpectralJacobian& jac) {
  json columns = json::array();
  for (std::size_t s = 0; s < jac.k; ++s)
    for (std::size_t r = 0; r < jac.n; ++r) columns.push_back({{"s", s}, {"r", r + 1}});
  return {{"matrix", matrix_to_json(jac.matrix)}, {"columns", columns}};
}

}  // namespace polyinv
