#pragma once

#include <optional>
#include <string_view>

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "polyinv/matrix_polynomial.hpp"

namespace polyinv {

/// The nk target proper values, kept in the order the user gave them.
class TargetSpectrum {
 public:
  /// Throws Error(InvalidInput) unless values.size() == n*k, n,k >= 1, every
  /// value is finite, and the values are pairwise separated by more than
  /// sep_tol_rel times their diameter.
  TargetSpectrum(Eigen::VectorXd values, std::size_t n, std::size_t k,
                 double sep_tol_rel = 1e-10);

  const Eigen::VectorXd& values() const { return values_; }
  std::size_t dimension() const { return n_; }
  std::size_t degree() const { return k_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

  Eigen::VectorXd sorted() const;
  double diameter() const;

 private:
  Eigen::VectorXd values_;
  std::size_t n_;
  std::size_t k_;
};

/// Diagonal alpha_k of the leading coefficient; every entry > 0.
class LeadingDiagonal {
 public:
  explicit LeadingDiagonal(Eigen::VectorXd alpha);
  static LeadingDiagonal ones(std::size_t n) { return LeadingDiagonal(Eigen::VectorXd::Ones(n)); }

  const Eigen::VectorXd& values() const { return alpha_; }
  std::size_t size() const { return static_cast<std::size_t>(alpha_.size()); }

 private:
  Eigen::VectorXd alpha_;
};

/// How targets are grouped onto diagonal entries of the seed.
enum class Grouping {
  InputOrder,  // targets q in [(r-1)k+1, rk] (1-based) share diagonal r
  Ascending,   // same blocking applied after sorting targets ascending
  Interleaved, // the q-th smallest target (0-based) goes to diagonal q mod n
};

std::string_view to_string(Grouping grouping);
/// "input", "ascending" or "interleaved"; nullopt otherwise.
std::optional<Grouping> grouping_from_string(std::string_view name);

/// e_j(roots): sum over all j-subsets of the product of their members.
/// e_0 = 1. Throws Error(InvalidInput) for j > roots.size().
double elementary_symmetric(std::span<const double> roots, std::size_t j);

/// e_0..e_m of m roots, by the one-pass recurrence.
std::vector<double> elementary_symmetric_all(std::span<const double> roots);

/// Diagonal index (0-based) owning each target (input index q, 0-based).
std::vector<std::size_t> block_assignment(const TargetSpectrum& spec,
                                          Grouping grouping = Grouping::InputOrder);

/// Diagonal matrix polynomial whose (t,t) entry is
/// alpha_{k,t} * prod_{q in block t} (z - lambda_q).
MatrixPolynomial seed_coefficients(const TargetSpectrum& spec, const LeadingDiagonal& lead,
                                   Grouping grouping = Grouping::InputOrder);

/// Diagonals of the non-leading seed coefficients flattened s-major, r-minor:
/// x[s*n + r] = alpha_{s,r}.
Eigen::VectorXd seed_diagonals(const TargetSpectrum& spec, const LeadingDiagonal& lead,
                               Grouping grouping = Grouping::InputOrder);

}  // namespace polyinv
