#include "polyinv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polyinv/sensitivity.hpp"

namespace polyinv {

ProblemSpec::ProblemSpec(TargetSpectrum spectrum, LeadingDiagonal lead, std::vector<Graph> graphs,
                         double epsilon, SolverControls controls,
                         std::vector<std::optional<Eigen::VectorXd>> overrides)
    : spectrum_(std::move(spectrum)),
      lead_(std::move(lead)),
      graphs_(std::move(graphs)),
      epsilon_(epsilon),
      controls_(std::move(controls)) {
  const auto n = spectrum_.dimension();
  const auto k = spectrum_.degree();
  if (lead_.size() != n) {
    throw Error(ErrorKind::InvalidInput, "leading diagonal has " + std::to_string(lead_.size()) +
                                             " entries, expected " + std::to_string(n));
  }
  if (graphs_.size() != k) {
    throw Error(ErrorKind::InvalidInput, "expected " + std::to_string(k) + " graphs, got " +
                                             std::to_string(graphs_.size()));
  }
  if (!overrides.empty() && overrides.size() != k) {
    throw Error(ErrorKind::InvalidInput, "off-diagonal overrides must list one entry per graph");
  }
  if (!std::isfinite(epsilon_)) throw Error(ErrorKind::InvalidInput, "epsilon must be finite");
  if (controls_.max_iter < 1) throw Error(ErrorKind::InvalidInput, "max_iter must be at least 1");
  if (controls_.continuation_steps < 1) {
    throw Error(ErrorKind::InvalidInput, "continuation_steps must be at least 1");
  }
  if (controls_.newton_tol && !(*controls_.newton_tol > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "newton_tol must be positive");
  }
  if (!(controls_.damping > 0.0) || controls_.damping > 1.0) {
    throw Error(ErrorKind::InvalidInput, "damping must lie in (0, 1]");
  }

  std::size_t zeros = 0;
  std::size_t total = 0;
  for (std::size_t s = 0; s < k; ++s) {
    const auto& g = graphs_[s];
    if (g.vertex_count() != n) {
      throw Error(ErrorKind::InvalidInput, "graph " + std::to_string(s) + " has " +
                                               std::to_string(g.vertex_count()) +
                                               " vertices, expected " + std::to_string(n));
    }
    Eigen::VectorXd y = Eigen::VectorXd::Constant(g.edge_count(), epsilon_);
    if (!overrides.empty() && overrides[s]) {
      y = *overrides[s];
      if (static_cast<std::size_t>(y.size()) != g.edge_count()) {
        throw Error(ErrorKind::InvalidInput,
                    "off-diagonal override " + std::to_string(s) + " has " +
                        std::to_string(y.size()) + " values for " +
                        std::to_string(g.edge_count()) + " edges");
      }
      if (!y.allFinite()) throw Error(ErrorKind::InvalidInput, "off-diagonal values must be finite");
    }
    zeros += static_cast<std::size_t>((y.array() == 0.0).count());
    total += static_cast<std::size_t>(y.size());
    offdiag_.push_back(std::move(y));
  }
  if (zeros != 0 && zeros != total) {
    throw Error(ErrorKind::InvalidInput,
                "off-diagonal values on graph edges must all be nonzero");
  }
}

double ProblemSpec::newton_tol() const {
  if (controls_.newton_tol) return *controls_.newton_tol;
  const double diameter = spectrum_.diameter();
  if (diameter > 0.0) return 1e-11 * diameter;
  return 1e-11 * std::max(1.0, std::abs(spectrum_.values()[0]));
}

double ProblemSpec::sep_tol() const {
  return controls_.spectrum.sep_tol_rel * spectrum_.diameter();
}

Eigen::VectorXd ProblemSpec::seed_x() const {
  return seed_diagonals(spectrum_, lead_, controls_.grouping);
}

MatrixPolynomial assemble(const Eigen::VectorXd& x, const ProblemSpec& spec, double tau) {
  const auto n = spec.dimension();
  const auto k = spec.degree();
  if (static_cast<std::size_t>(x.size()) != n * k) {
    throw Error(ErrorKind::InvalidInput, "diagonal unknowns must have length nk = " +
                                             std::to_string(n * k));
  }
  std::vector<Eigen::MatrixXd> coeffs;
  coeffs.reserve(k + 1);
  for (std::size_t s = 0; s < k; ++s) {
    const Eigen::VectorXd y = tau == 1.0 ? spec.offdiag()[s] : Eigen::VectorXd(tau * spec.offdiag()[s]);
    coeffs.push_back(matrix_of_graph(spec.graphs()[s], x.segment(s * n, n), y));
  }
  coeffs.push_back(spec.lead().values().asDiagonal().toDenseMatrix());
  return MatrixPolynomial(std::move(coeffs));
}

Eigen::VectorXd spectral_map(const Eigen::VectorXd& x, const ProblemSpec& spec, double tau) {
  return proper_values(assemble(x, spec, tau), spec.controls().spectrum).values();
}

bool StructureVerdict::ok() const {
  return leading_ok &&
         std::all_of(coefficient_ok.begin(), coefficient_ok.end(), [](bool b) { return b; });
}

StructureVerdict check_structure(const MatrixPolynomial& p, const ProblemSpec& spec,
                                 double zero_tol) {
  StructureVerdict v;
  const auto k = spec.degree();
  if (p.dimension() != spec.dimension() || p.degree() != k) {
    v.coefficient_ok.assign(k, false);
    return v;
  }
  for (std::size_t s = 0; s < k; ++s) {
    bool ok = false;
    try {
      ok = graph_of_matrix(p.coefficient(s), zero_tol) == spec.graphs()[s];
    } catch (const Error&) {
      ok = false;
    }
    v.coefficient_ok.push_back(ok);
  }
  const Eigen::MatrixXd lead = spec.lead().values().asDiagonal().toDenseMatrix();
  v.leading_ok = (p.leading().array() == lead.array()).all();
  return v;
}

namespace {

struct IterateState {
  MatrixPolynomial poly;
  SpectralDecomposition decomp;
  Matching matching;
  Eigen::VectorXd residual_vec;
  double residual = 0.0;
};

IterateState evaluate(const Eigen::VectorXd& x, const ProblemSpec& spec, double tau,
                      const Eigen::VectorXd& targets) {
  MatrixPolynomial poly = assemble(x, spec, tau);
  SpectralDecomposition decomp = proper_values(poly, spec.controls().spectrum);
  const Eigen::VectorXd values = decomp.values();
  Matching matching = match_targets(values, targets, spec.sep_tol());
  Eigen::VectorXd r(targets.size());
  for (Eigen::Index q = 0; q < targets.size(); ++q) {
    r[q] = values[static_cast<Eigen::Index>(matching.index[q])] - targets[q];
  }
  const double res = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  return {std::move(poly), std::move(decomp), std::move(matching), std::move(r), res};
}

struct NewtonOutcome {
  Eigen::VectorXd x;
  std::optional<IterateState> state;
  std::vector<IterationRecord> trace;
  bool matching_fallback = false;
  std::optional<ErrorKind> failure;
  std::string message;
};

NewtonOutcome run_newton(const ProblemSpec& spec, const Eigen::VectorXd& x0, double tau) {
  const auto& ctl = spec.controls();
  const Eigen::VectorXd targets = spec.spectrum().sorted();
  const double tol = spec.newton_tol();

  NewtonOutcome out;
  out.x = x0;
  try {
    out.state = evaluate(x0, spec, tau, targets);
  } catch (const Error& e) {
    out.failure = e.kind();
    out.message = e.what();
    return out;
  }
  out.matching_fallback = out.state->matching.used_fallback;
  out.trace.push_back({tau, 0, out.state->residual, 0.0, 0.0});

  for (std::size_t it = 1; it <= ctl.max_iter && out.state->residual > tol; ++it) {
    const auto& st = *out.state;
    Eigen::MatrixXd jac;
    try {
      jac = ctl.jacobian == JacobianSource::Analytic
                ? jacobian_x(st.poly, st.decomp, st.matching.index).matrix
                : jacobian_fd(st.poly, st.matching.index, ctl.fd_step, ctl.spectrum).matrix;
    } catch (const Error& e) {
      out.failure = e.kind();
      out.message = e.what();
      return out;
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    const Eigen::VectorXd step = lu.solve(st.residual_vec);
    if (!(lu.rcond() > 1e-14) || !step.allFinite()) {
      out.failure = ErrorKind::SingularJacobian;
      out.message = "spectral Jacobian is singular at iteration " + std::to_string(it);
      return out;
    }

    double scale = ctl.damping;
    bool accepted = false;
    std::string last_rejection = "residual did not decrease";
    for (std::size_t h = 0; h <= ctl.max_halvings; ++h, scale *= 0.5) {
      Eigen::VectorXd trial = out.x - scale * step;
      try {
        IterateState next = evaluate(trial, spec, tau, targets);
        if (next.residual < st.residual) {
          out.x = std::move(trial);
          out.matching_fallback = out.matching_fallback || next.matching.used_fallback;
          out.state = std::move(next);
          accepted = true;
          break;
        }
      } catch (const Error& e) {
        last_rejection = e.what();
      }
    }
    if (!accepted) {
      out.failure = ErrorKind::NoConvergence;
      out.message = "line search failed at iteration " + std::to_string(it) + ": " + last_rejection;
      return out;
    }
    out.trace.push_back({tau, it, out.state->residual, scale * step.cwiseAbs().maxCoeff(), scale});
  }

  if (out.state->residual > tol) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "no convergence after " << ctl.max_iter << " iterations (residual "
        << out.state->residual << ", tolerance " << tol << ")";
    out.failure = ErrorKind::NoConvergence;
    out.message = msg.str();
  }
  return out;
}

void fill_final(SolveReport& report, const ProblemSpec& spec, const Eigen::VectorXd& x,
                double tau) {
  report.x = x;
  report.tau_reached = tau;
  report.polynomial = assemble(x, spec, tau);
  report.newton_tol = spec.newton_tol();
  report.grouping = spec.controls().grouping;
  report.structure = check_structure(report.polynomial, spec);
  report.structure_ok = report.structure.ok();
}

}  // namespace

SolveReport newton_solve(const ProblemSpec& spec, const Eigen::VectorXd& x0, double tau) {
  NewtonOutcome out = run_newton(spec, x0, tau);
  if (out.failure) throw Error(*out.failure, out.message);
  SolveReport report;
  fill_final(report, spec, out.x, tau);
  report.proper_values = out.state->decomp.values();
  report.residual = out.state->residual;
  report.iterations = std::move(out.trace);
  report.matching_fallback = out.matching_fallback;
  report.continuation_path.push_back(
      {tau, report.iterations.empty() ? 0 : report.iterations.back().iteration, report.residual});
  return report;
}

SolveReport newton_solve(const ProblemSpec& spec) { return newton_solve(spec, spec.seed_x()); }

SolveReport continuation_solve(const ProblemSpec& spec) {
  const Grouping primary = spec.controls().grouping;
  SolveReport first = continuation_solve(spec, spec.seed_x());
  first.grouping = primary;
  if (first.converged() || !spec.controls().grouping_fallback) return first;
  for (Grouping g : {Grouping::Interleaved, Grouping::Ascending, Grouping::InputOrder}) {
    if (g == primary) continue;
    SolveReport alt = continuation_solve(spec, seed_diagonals(spec.spectrum(), spec.lead(), g));
    if (!alt.converged()) continue;
    alt.grouping = g;
    alt.message = "solved from the " + std::string(to_string(g)) + " seed; the " +
                  std::string(to_string(primary)) + " seed failed: " + first.message;
    return alt;
  }
  return first;
}

SolveReport continuation_solve(const ProblemSpec& spec, const Eigen::VectorXd& x0) {
  const auto& ctl = spec.controls();
  SolveReport report;
  std::size_t steps = ctl.continuation_steps;
  std::size_t done = 0;  // solved grid points on the current grid of `steps` intervals
  Eigen::VectorXd x = x0;
  double tau_reached = 0.0;
  std::optional<IterateState> last_state;

  while (done < steps) {
    const double tau = static_cast<double>(done + 1) / static_cast<double>(steps);
    NewtonOutcome out = run_newton(spec, x, tau);
    report.iterations.insert(report.iterations.end(), out.trace.begin(), out.trace.end());
    report.matching_fallback = report.matching_fallback || out.matching_fallback;
    if (!out.failure) {
      x = std::move(out.x);
      tau_reached = tau;
      const std::size_t its = out.trace.empty() ? 0 : out.trace.back().iteration;
      report.continuation_path.push_back({tau, its, out.state->residual});
      last_state = std::move(out.state);
      ++done;
      continue;
    }
    if (steps * 2 > ctl.max_continuation_steps) {
      report.failure = out.failure;
      report.message = out.message;
      report.failed_tau = tau;
      break;
    }
    steps *= 2;
    done *= 2;
  }

  fill_final(report, spec, x, tau_reached);
  if (last_state) {
    report.proper_values = last_state->decomp.values();
    report.residual = last_state->residual;
  } else {
    try {
      report.proper_values = proper_values(report.polynomial, ctl.spectrum).values();
      report.residual =
          (report.proper_values - spec.spectrum().sorted()).cwiseAbs().maxCoeff();
    } catch (const Error&) {
      report.proper_values.resize(0);
      report.residual = std::numeric_limits<double>::infinity();
    }
  }
  return report;
}

Verification verify(const MatrixPolynomial& p, const ProblemSpec& spec, double tolerance,
                    double zero_tol) {
  Verification v;
  v.tolerance = tolerance;
  v.structure = check_structure(p, spec, zero_tol);
  if (p.dimension() != spec.dimension() || p.degree() != spec.degree()) {
    v.failures.push_back("polynomial is " + std::to_string(p.dimension()) + "x" +
                         std::to_string(p.dimension()) + " of degree " +
                         std::to_string(p.degree()) + ", problem expects " +
                         std::to_string(spec.dimension()) + "x" +
                         std::to_string(spec.dimension()) + " of degree " +
                         std::to_string(spec.degree()));
    v.residual = std::numeric_limits<double>::infinity();
    return v;
  }
  try {
    v.proper_values = proper_values(p, spec.controls().spectrum).values();
    v.residual = (v.proper_values - spec.spectrum().sorted()).cwiseAbs().maxCoeff();
    v.spectrum_ok = v.residual <= tolerance;
    if (!v.spectrum_ok) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "proper values differ from the targets by " << v.residual << " > " << tolerance;
      v.failures.push_back(msg.str());
    }
  } catch (const Error& e) {
    v.residual = std::numeric_limits<double>::infinity();
    v.failures.push_back(std::string(to_string(e.kind())) + ": " + e.what());
  }
  for (std::size_t s = 0; s < v.structure.coefficient_ok.size(); ++s) {
    if (!v.structure.coefficient_ok[s]) {
      v.failures.push_back("graph of coefficient " + std::to_string(s) +
                           " does not match the prescribed graph");
    }
  }
  if (!v.structure.leading_ok) {
    v.failures.push_back("leading coefficient differs from diag(leading)");
  }
  return v;
}

}  // namespace polyinv
