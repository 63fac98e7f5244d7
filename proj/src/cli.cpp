#include "polyinv/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "polyinv/error.hpp"
#include "polyinv/problem_io.hpp"
#include "polyinv/seed.hpp"
#include "polyinv/sensitivity.hpp"
#include "polyinv/solver.hpp"

namespace polyinv::cli {

namespace {

struct GlobalOptions {
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  bool quiet = false;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return kParseError;
    case ErrorKind::InvalidInput:
    case ErrorKind::Definiteness: return kInvalidProblem;
    case ErrorKind::NonRealSpectrum: return kNonRealSpectrum;
    default: return kNoConvergence;
  }
}

ProblemSpec load_with_overrides(const std::string& path, const GlobalOptions& global,
                                bool apply_tol) {
  ProblemSpec spec = load_problem(path);
  if (global.max_iter) {
    if (*global.max_iter < 1) throw Error(ErrorKind::InvalidInput, "--max-iter must be at least 1");
    spec.controls().max_iter = *global.max_iter;
  }
  if (apply_tol && global.tol) {
    if (!(*global.tol > 0.0)) throw Error(ErrorKind::InvalidInput, "--tol must be positive");
    spec.controls().newton_tol = *global.tol;
  }
  return spec;
}

// Report JSON goes to --out when given, else to `out`; the human summary then
// goes to whichever stream does not carry JSON.
void emit(const json& doc, const std::string& out_path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path);
  if (!file) throw Error(ErrorKind::Parse, "cannot write " + out_path);
  file << text;
}

std::ostream& summary_stream(const std::string& out_path, std::ostream& out, std::ostream& err) {
  return out_path.empty() ? err : out;
}

void print_matrix(std::ostream& os, const std::string& name, const Eigen::MatrixXd& m) {
  os << name << " =\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      os << std::setw(22) << std::setprecision(15) << m(i, j);
    }
    os << '\n';
  }
}

void print_polynomial(std::ostream& os, const MatrixPolynomial& p) {
  for (std::size_t s = p.degree() + 1; s-- > 0;) {
    print_matrix(os, "A_" + std::to_string(s), p.coefficient(s));
  }
}

void print_values(std::ostream& os, const std::string& name, const Eigen::VectorXd& v) {
  os << name << ":";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ' ' << std::setprecision(15) << v[i];
  os << '\n';
}

int cmd_seed(const std::string& problem, const std::string& out_path, const GlobalOptions& global,
             std::ostream& out, std::ostream& err) {
  const ProblemSpec spec = load_with_overrides(problem, global, false);
  const MatrixPolynomial seed =
      seed_coefficients(spec.spectrum(), spec.lead(), spec.controls().grouping);
  const Eigen::VectorXd values = proper_values(seed, spec.controls().spectrum).values();
  const Eigen::VectorXd targets = spec.spectrum().sorted();
  const double residual = (values - targets).cwiseAbs().maxCoeff();

  json owners = json::array();
  for (auto r : block_assignment(spec.spectrum(), spec.controls().grouping)) owners.push_back(r + 1);
  const json doc = {{"config", problem_to_json(spec)},
                    {"polynomial", polynomial_to_json(seed)},
                    {"x", vector_to_json(spec.seed_x())},
                    {"block_assignment", owners},
                    {"proper_values", vector_to_json(values)},
                    {"targets_sorted", vector_to_json(targets)},
                    {"residual", residual}};
  emit(doc, out_path, out);
  if (!global.quiet) {
    auto& os = summary_stream(out_path, out, err);
    os << "seed polynomial (n = " << spec.dimension() << ", k = " << spec.degree() << ")\n";
    print_polynomial(os, seed);
    print_values(os, "proper values", values);
    os << "max |lambda - target| = " << std::setprecision(3) << residual << '\n';
  }
  return kOk;
}

int cmd_solve(const std::string& problem, const std::string& out_path, bool fd_jacobian,
              std::optional<std::size_t> continuation, const GlobalOptions& global,
              std::ostream& out, std::ostream& err) {
  ProblemSpec spec = load_with_overrides(problem, global, true);
  if (fd_jacobian) spec.controls().jacobian = JacobianSource::FiniteDifference;
  if (continuation) {
    if (*continuation < 1) throw Error(ErrorKind::InvalidInput, "--continuation must be at least 1");
    spec.controls().continuation_steps = *continuation;
    spec.controls().max_continuation_steps =
        std::max(spec.controls().max_continuation_steps, *continuation);
  }
  const SolveReport report = continuation_solve(spec);
  emit(report_to_json(report, spec), out_path, out);

  if (!global.quiet) {
    auto& os = summary_stream(out_path, out, err);
    os << (report.converged() ? "converged" : "NOT converged") << " (tau reached "
       << report.tau_reached << ", " << report.iterations.size() << " trace records, "
       << report.continuation_path.size() << " continuation steps)\n";
    print_polynomial(os, report.polynomial);
    print_values(os, "proper values", report.proper_values);
    os << "max |lambda - target| = " << std::setprecision(3) << report.residual
       << "  structure " << (report.structure_ok ? "ok" : "VIOLATED") << '\n';
    if (!report.converged()) os << report.message << '\n';
  }
  if (report.converged()) return kOk;
  if (*report.failure == ErrorKind::NonRealSpectrum && report.tau_reached == 0.0) {
    return kNonRealSpectrum;
  }
  return kNoConvergence;
}

int cmd_verify(const std::string& polynomial, const std::string& problem,
               const std::string& out_path, const GlobalOptions& global, std::ostream& out,
               std::ostream& err) {
  const ProblemSpec spec = load_with_overrides(problem, global, false);
  const MatrixPolynomial p = polynomial_from_json(read_json_file(polynomial));
  const double tol =
      global.tol.value_or(1e-9 * std::max(1.0, spec.spectrum().diameter()));
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "--tol must be positive");
  const Verification v = verify(p, spec, tol);
  emit(verification_to_json(v), out_path, out);
  if (!global.quiet) {
    auto& os = summary_stream(out_path, out, err);
    os << (v.passed() ? "PASS" : "FAIL") << "  max |lambda - target| = " << std::setprecision(3)
       << v.residual << " (tolerance " << tol << ")\n";
    for (const auto& f : v.failures) os << "  " << f << '\n';
  }
  return v.passed() ? kOk : kVerificationFailed;
}

int cmd_jacobian(const std::string& problem, const std::string& at, const std::string& out_path,
                 const GlobalOptions& global, std::ostream& out, std::ostream& err) {
  const ProblemSpec spec = load_with_overrides(problem, global, false);
  const bool at_seed = at == "seed";
  Eigen::VectorXd x = spec.seed_x();
  double tau = 0.0;
  if (!at_seed) {
    const json doc = read_json_file(at);
    if (!doc.is_object() || !doc.contains("x")) {
      throw Error(ErrorKind::Parse, at + ": expected an object with field 'x'");
    }
    x = vector_from_json(doc["x"], "x");
    tau = 1.0;
  }
  const MatrixPolynomial p = assemble(x, spec, tau);
  const SpectralDecomposition decomp = proper_values(p, spec.controls().spectrum);
  const Eigen::VectorXd targets = spec.spectrum().sorted();
  const Matching matching = match_targets(decomp.values(), targets, spec.sep_tol());
  const SpectralJacobian jac = jacobian_x(p, decomp, matching.index);
  const SpectralJacobian fd = jacobian_fd(p, matching.index, spec.controls().fd_step,
                                          spec.controls().spectrum);
  const double scale_ref = std::max(1.0, jac.matrix.cwiseAbs().maxCoeff());
  const double fd_error = (jac.matrix - fd.matrix).cwiseAbs().maxCoeff() / scale_ref;

  json doc = jacobian_to_json(jac);
  doc["config"] = problem_to_json(spec);
  doc["at"] = at_seed ? "seed" : at;
  doc["x"] = vector_to_json(x);
  doc["row_values"] = vector_to_json(targets);
  doc["condition"] = condition_number(jac.matrix);
  doc["fd_max_error"] = fd_error;

  if (at_seed) {
    // Row q tracks the q-th smallest target; its owner is the diagonal it was seeded on.
    const auto owner_by_input = block_assignment(spec.spectrum(), spec.controls().grouping);
    std::vector<std::size_t> order(owner_by_input.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto& vals = spec.spectrum().values();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::size_t> row_owner(order.size());
    for (std::size_t q = 0; q < order.size(); ++q) row_owner[q] = owner_by_input[order[q]];
    Eigen::VectorXd row_values(order.size());
    for (std::size_t q = 0; q < order.size(); ++q) {
      row_values[q] = decomp.pairs[matching.index[q]].value;
    }
    const SeedStructureCheck check = check_seed_structure(jac, p, row_values, row_owner);
    doc["seed_structure"] = {{"passed", check.passed},
                             {"max_off_block", check.max_off_block},
                             {"max_vandermonde_deviation", check.max_vandermonde_deviation}};
  } else {
    doc["seed_structure"] = nullptr;
  }
  emit(doc, out_path, out);
  if (!global.quiet) {
    auto& os = summary_stream(out_path, out, err);
    print_matrix(os, "Jacobian", jac.matrix);
    os << "condition = " << std::setprecision(6) << doc["condition"].get<double>()
       << "  finite-difference max error = " << fd_error << '\n';
    if (at_seed) {
      os << "block Vandermonde structure: "
         << (doc["seed_structure"]["passed"].get<bool>() ? "pass" : "FAIL") << '\n';
    }
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured inverse spectral problems for symmetric matrix polynomials"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  double tol = 0.0;
  std::size_t max_iter = 0;
  auto* tol_opt = app.add_option("--tol", tol, "Newton tolerance (solve) or verification tolerance (verify)");
  auto* iter_opt = app.add_option("--max-iter", max_iter, "Maximum Newton iterations per continuation step");
  app.add_flag("--quiet", global.quiet, "Suppress the human-readable summary");

  std::string problem, polynomial, out_path, at = "seed";
  bool fd_jacobian = false;
  std::size_t continuation = 0;

  auto* seed = app.add_subcommand("seed", "Build the diagonal seed polynomial");
  seed->add_option("problem", problem, "Problem JSON file")->required();
  seed->add_option("--out", out_path, "Write the report JSON here");

  auto* solve = app.add_subcommand("solve", "Reconstruct the structured polynomial");
  solve->add_option("problem", problem, "Problem JSON file")->required();
  solve->add_option("--out", out_path, "Write the report JSON here");
  solve->add_flag("--fd-jacobian", fd_jacobian, "Use the finite-difference Jacobian");
  auto* cont_opt = solve->add_option("--continuation", continuation, "Initial continuation steps");

  auto* ver = app.add_subcommand("verify", "Check a polynomial against a problem");
  ver->add_option("polynomial", polynomial, "Polynomial or solve report JSON file")->required();
  ver->add_option("problem", problem, "Problem JSON file")->required();
  ver->add_option("--out", out_path, "Write the verdict JSON here");

  auto* jac = app.add_subcommand("jacobian", "Dump the spectral Jacobian");
  jac->add_option("problem", problem, "Problem JSON file")->required();
  jac->add_option("--at", at, "'seed' or a JSON file with field 'x'");
  jac->add_option("--out", out_path, "Write the Jacobian JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }
  if (*tol_opt) global.tol = tol;
  if (*iter_opt) global.max_iter = max_iter;

  try {
    if (*seed) return cmd_seed(problem, out_path, global, out, err);
    if (*solve) {
      return cmd_solve(problem, out_path, fd_jacobian,
                       *cont_opt ? std::optional<std::size_t>(continuation) : std::nullopt, global,
                       out, err);
    }
    if (*ver) return cmd_verify(polynomial, problem, out_path, global, out, err);
    return cmd_jacobian(problem, at, out_path, global, out, err);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
}

}  // namespace polyinv::cli
