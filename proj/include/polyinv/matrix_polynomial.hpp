#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace polyinv {

/// A(z) = A_k z^k + ... + A_1 z + A_0 with real symmetric n x n coefficients.
///
/// The degree is exact: A_k has a nonzero entry whenever k >= 1. The only
/// polynomial allowed a zero leading coefficient is the degree-0 zero
/// polynomial, which is what differentiating a constant yields.
class MatrixPolynomial {
 public:
  /// `coefficients[s]` multiplies z^s. Throws Error(InvalidInput) if the list
  /// is empty, the matrices are not all square of one size, a coefficient is
  /// not symmetric to working precision, or the degree is not exact.
  explicit MatrixPolynomial(std::vector<Eigen::MatrixXd> coefficients);

  static MatrixPolynomial zero(std::size_t n);

  std::size_t dimension() const { return n_; }
  std::size_t degree() const { return coeffs_.size() - 1; }
  const Eigen::MatrixXd& coefficient(std::size_t s) const { return coeffs_.at(s); }
  const std::vector<Eigen::MatrixXd>& coefficients() const { return coeffs_; }
  const Eigen::MatrixXd& leading() const { return coeffs_.back(); }

 private:
  std::size_t n_ = 0;
  std::vector<Eigen::MatrixXd> coeffs_;
};

/// Horner evaluation of A(z).
Eigen::MatrixXd eval(const MatrixPolynomial& p, double z);

/// A^{(1)}(z) = k A_k z^{k-1} + ... + A_1. A constant maps to the zero
/// polynomial of degree 0.
MatrixPolynomial derivative(const MatrixPolynomial& p);

/// Magnitude reference sum_s ||A_s||_F |z|^s used to make residuals relative.
double scale(const MatrixPolynomial& p, double z);

/// Block companion matrix of the monic polynomial A_k^{-1} A(z).
///
/// The first k-1 block rows are shifted identities, the last block row is
/// (-B_0, ..., -B_{k-1}) with B_s = A_k^{-1} A_s. Its eigenvalues are the
/// proper values of A with multiplicity. Requires A_k diagonal with a
/// strictly positive diagonal, otherwise throws Error(Definiteness).
Eigen::MatrixXd linearize(const MatrixPolynomial& p);

struct ProperPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // unit 2-norm, largest-magnitude entry positive
  double residual = 0.0;   // ||A(value) vector||_2 / scale(A, value)
};

/// Proper pairs in ascending order of value.
struct SpectralDecomposition {
  std::vector<ProperPair> pairs;

  std::size_t size() const { return pairs.size(); }
  Eigen::VectorXd values() const;
};

struct SpectrumOptions {
  /// An eigenvalue mu of the linearization counts as real when
  /// |Im mu| <= real_tol * (1 + |Re mu|).
  double real_tol = 1e-8;
  /// Minimum gap between consecutive values, relative to the spectrum diameter.
  double sep_tol_rel = 1e-10;
};

/// All nk proper values with unit proper vectors.
///
/// Values come from the companion linearization. Each vector starts as the
/// leading n-block of the companion eigenvector and gets one inverse
/// iteration step on A(lambda); the value then gets one Newton correction
/// on the Rayleigh functional v^T A(z) v. Throws Error(NonRealSpectrum) when
/// an eigenvalue violates the realness bound and Error(NearDegenerate) when
/// two values are closer than sep_tol_rel times the spectrum diameter.
SpectralDecomposition proper_values(const MatrixPolynomial& p, const SpectrumOptions& opts = {});

}  // namespace polyinv
