#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyinv/error.hpp"
#include "polyinv/graph.hpp"
#include "polyinv/matching.hpp"
#include "polyinv/matrix_polynomial.hpp"
#include "polyinv/seed.hpp"

namespace polyinv {

enum class JacobianSource { Analytic, FiniteDifference };

struct SolverControls {
  /// Stop when max_q |lambda_q - target_q| <= newton_tol. Unset means
  /// 1e-11 times the target diameter.
  std::optional<double> newton_tol;
  std::size_t max_iter = 50;
  /// Initial number of uniform continuation steps; doubled on failure up to
  /// max_continuation_steps.
  std::size_t continuation_steps = 1;
  std::size_t max_continuation_steps = 64;
  /// Initial step scale; halved up to max_halvings times until the residual drops.
  double damping = 1.0;
  std::size_t max_halvings = 30;
  JacobianSource jacobian = JacobianSource::Analytic;
  double fd_step = 1e-6;
  Grouping grouping = Grouping::InputOrder;
  /// When continuation from the configured grouping's seed fails, retry from
  /// the seeds of the other groupings (interleaved, ascending, input order).
  bool grouping_fallback = true;
  SpectrumOptions spectrum;
};

/// Targets, leading diagonal, one graph per non-leading coefficient and the
/// off-diagonal values held fixed during the solve.
class ProblemSpec {
 public:
  /// Off-diagonal values of graph s are `overrides[s]` when given, otherwise
  /// `epsilon` on every edge. Throws Error(InvalidInput) if the graphs are
  /// not k graphs on n vertices, an override has the wrong length, or the
  /// off-diagonal values mix zero and nonzero entries. All-zero off-diagonals
  /// (epsilon = 0) describe the unperturbed seed problem.
  ProblemSpec(TargetSpectrum spectrum, LeadingDiagonal lead, std::vector<Graph> graphs,
              double epsilon = 0.5, SolverControls controls = {},
              std::vector<std::optional<Eigen::VectorXd>> overrides = {});

  const TargetSpectrum& spectrum() const { return spectrum_; }
  const LeadingDiagonal& lead() const { return lead_; }
  const std::vector<Graph>& graphs() const { return graphs_; }
  const std::vector<Eigen::VectorXd>& offdiag() const { return offdiag_; }
  double epsilon() const { return epsilon_; }
  const SolverControls& controls() const { return controls_; }
  SolverControls& controls() { return controls_; }

  std::size_t dimension() const { return spectrum_.dimension(); }
  std::size_t degree() const { return spectrum_.degree(); }

  double newton_tol() const;
  /// Separation tolerance for targets and matching: sep_tol_rel * diameter.
  double sep_tol() const;
  Eigen::VectorXd seed_x() const;

 private:
  TargetSpectrum spectrum_;
  LeadingDiagonal lead_;
  std::vector<Graph> graphs_;
  std::vector<Eigen::VectorXd> offdiag_;
  double epsilon_;
  SolverControls controls_;
};

/// M(z, x, tau*y): coefficient s < k is the matrix of G_s with diagonal
/// x[s*n .. s*n+n) and off-diagonals tau*y_s; the leading coefficient is
/// diag(alpha_k).
MatrixPolynomial assemble(const Eigen::VectorXd& x, const ProblemSpec& spec, double tau = 1.0);

/// Ascending proper values of assemble(x, spec, tau).
Eigen::VectorXd spectral_map(const Eigen::VectorXd& x, const ProblemSpec& spec, double tau = 1.0);

struct IterationRecord {
  double tau = 1.0;
  std::size_t iteration = 0;
  double residual = 0.0;
  double step_norm = 0.0;  // infinity norm of the accepted step
  double damping = 0.0;    // step scale actually used
};

struct ContinuationStep {
  double tau = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
};

struct StructureVerdict {
  /// coefficient_ok[s]: graph_of_matrix(A_s) == G_s for s < k.
  std::vector<bool> coefficient_ok;
  /// A_k == diag(alpha_k) bitwise.
  bool leading_ok = false;

  bool ok() const;
};

StructureVerdict check_structure(const MatrixPolynomial& p, const ProblemSpec& spec,
                                 double zero_tol = 0.0);

struct SolveReport {
  MatrixPolynomial polynomial = MatrixPolynomial::zero(1);
  Eigen::VectorXd x;
  Eigen::VectorXd proper_values;  // ascending, of `polynomial`
  double residual = 0.0;          // max_q |proper_values[q] - sorted target q|
  double newton_tol = 0.0;
  std::vector<IterationRecord> iterations;
  std::vector<ContinuationStep> continuation_path;
  StructureVerdict structure;
  bool structure_ok = false;
  bool matching_fallback = false;
  /// Grouping whose seed started the returned solve.
  Grouping grouping = Grouping::InputOrder;

  /// Empty on convergence; otherwise why the solve stopped.
  std::optional<ErrorKind> failure;
  std::string message;
  /// Largest off-diagonal scale whose problem was solved.
  double tau_reached = 0.0;
  std::optional<double> failed_tau;

  bool converged() const { return !failure.has_value(); }
};

/// Damped Newton on the diagonal unknowns at off-diagonal scale tau.
///
/// Each iteration solves J step = f(x) - targets with the spectral
/// Jacobian and accepts x - a*step for the first a in damping, damping/2, ...
/// that strictly lowers the residual infinity norm. Throws
/// Error(NoConvergence), Error(SingularJacobian) or the spectrum errors of
/// proper_values when the iteration cannot finish.
SolveReport newton_solve(const ProblemSpec& spec, const Eigen::VectorXd& x0, double tau = 1.0);
SolveReport newton_solve(const ProblemSpec& spec);

/// Solves the problems with off-diagonals scaled by tau_j = j/N, each warm
/// started from the previous one. On failure N is doubled (up to
/// max_continuation_steps) and the path resumes from the last solved tau.
/// Never throws for solver failures: the report carries the failure, the
/// largest tau reached and the polynomial solved there.
///
/// Without x0 the path starts at the seed of the configured grouping and,
/// if that fails and grouping_fallback is set, at the seeds of the remaining
/// groupings in turn. The first converged report is returned, else the
/// report of the configured grouping.
SolveReport continuation_solve(const ProblemSpec& spec);
SolveReport continuation_solve(const ProblemSpec& spec, const Eigen::VectorXd& x0);

struct Verification {
  Eigen::VectorXd proper_values;  // ascending; empty if they could not be computed
  double residual = 0.0;
  double tolerance = 0.0;
  bool spectrum_ok = false;
  StructureVerdict structure;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// Recomputes the spectrum of p, compares it to the sorted targets within
/// `tolerance`, and checks the graph of every non-leading coefficient and
/// the leading diagonal against the problem.
Verification verify(const MatrixPolynomial& p, const ProblemSpec& spec, double tolerance,
                    double zero_tol = 0.0);

}  // namespace polyinv
