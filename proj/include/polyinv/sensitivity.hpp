#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "polyinv/graph.hpp"
#include "polyinv/matrix_polynomial.hpp"

namespace polyinv {

/// Perturbation t * z^s * E_slot of one free entry of coefficient s < k.
/// For an off-diagonal slot E carries two unit entries, (i,j) and (j,i).
using PerturbationDirection = PatternSlot;

/// d lambda / d t for the simple proper pair (lambda, v) of P under
/// P(z) + t z^s E_slot:
///
///   -(v^T z^s E v) / (v^T A'(lambda) v)
///
/// At a diagonal polynomial with v = e_r this is -lambda^s / A'(lambda)_rr for
/// slot (r,r) and zero for every other slot. Throws
/// Error(DegenerateDenominator) when |v^T A'(lambda) v| < tol * scale(A', lambda).
double eigderivative(const MatrixPolynomial& p, const ProperPair& pair,
                     const PerturbationDirection& dir, double tol = 1e-10);

/// d lambda_q / d x_{s,r}. Rows follow the target order of the matching;
/// columns are the diagonal unknowns, s-major and r-minor (column s*n + r).
struct SpectralJacobian {
  Eigen::MatrixXd matrix;
  std::size_t n = 0;
  std::size_t k = 0;

  static std::size_t column(std::size_t n, std::size_t s, std::size_t r) { return s * n + r; }
};

/// Analytic Jacobian. matching[q] is the index in `decomp` of the proper
/// value tracked by row q. Throws Error(DegenerateDenominator) naming the row.
SpectralJacobian jacobian_x(const MatrixPolynomial& p, const SpectralDecomposition& decomp,
                            std::span<const std::size_t> matching);

/// Central-difference Jacobian: each diagonal unknown is moved by +-h, the
/// spectrum recomputed, and every tracked value re-matched to the nearest
/// perturbed value.
SpectralJacobian jacobian_fd(const MatrixPolynomial& p, std::span<const std::size_t> matching,
                             double h, const SpectrumOptions& opts = {});

struct SeedStructureCheck {
  bool passed = false;
  /// Largest |J(q, (s,r))| over columns whose r is not the diagonal owning row q.
  double max_off_block = 0.0;
  /// Largest relative gap between the negated, row-scaled Jacobian and the
  /// Vandermonde entries lambda_q^s.
  double max_vandermonde_deviation = 0.0;
  /// 2-norm condition number of the Jacobian.
  double condition = 0.0;
};

/// Checks the block Vandermonde form of the Jacobian at a diagonal seed.
/// `row_values[q]` is the proper value of row q and `row_owner[q]` the
/// diagonal index whose scalar polynomial vanishes there.
SeedStructureCheck check_seed_structure(const SpectralJacobian& jac, const MatrixPolynomial& seed,
                                        const Eigen::VectorXd& row_values,
                                        std::span<const std::size_t> row_owner,
                                        double tol = 1e-12);

/// 2-norm condition number; infinity when singular.
double condition_number(const Eigen::MatrixXd& a);

}  // namespace polyinv
