#include "polyinv/sensitivity.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "polyinv/error.hpp"

namespace polyinv {

namespace {

double quadratic_form(const PerturbationDirection& dir, const Eigen::VectorXd& v) {
  if (dir.kind == SlotKind::Diagonal) return v[dir.i] * v[dir.i];
  return 2.0 * v[dir.i] * v[dir.j];
}

void check_direction(const MatrixPolynomial& p, const PerturbationDirection& dir) {
  if (dir.coefficient >= p.degree()) {
    throw Error(ErrorKind::InvalidInput, "perturbation of coefficient " +
                                             std::to_string(dir.coefficient) +
                                             " not allowed: leading coefficient is fixed");
  }
  if (dir.i >= p.dimension() || dir.j >= p.dimension()) {
    throw Error(ErrorKind::InvalidInput, "perturbation slot outside the matrix");
  }
  if (dir.kind == SlotKind::OffDiagonal && dir.i == dir.j) {
    throw Error(ErrorKind::InvalidInput, "off-diagonal slot on the diagonal");
  }
}

double checked_denominator(const MatrixPolynomial& dp, const ProperPair& pair, double tol) {
  const double denom = pair.vector.dot(eval(dp, pair.value) * pair.vector);
  if (!(std::abs(denom) >= tol * scale(dp, pair.value))) {
    throw Error(ErrorKind::DegenerateDenominator,
                "v^T A'(lambda) v vanishes at lambda = " + std::to_string(pair.value));
  }
  return denom;
}

}  // namespace

double eigderivative(const MatrixPolynomial& p, const ProperPair& pair,
                     const PerturbationDirection& dir, double tol) {
  check_direction(p, dir);
  const double denom = checked_denominator(derivative(p), pair, tol);
  const double numer = std::pow(pair.value, static_cast<double>(dir.coefficient)) *
                       quadratic_form(dir, pair.vector);
  return -numer / denom;
}

SpectralJacobian jacobian_x(const MatrixPolynomial& p, const SpectralDecomposition& decomp,
                            std::span<const std::size_t> matching) {
  const auto n = p.dimension();
  const auto k = p.degree();
  if (matching.size() != n * k || decomp.size() != n * k) {
    throw Error(ErrorKind::InvalidInput, "Jacobian needs nk matched proper pairs");
  }
  const MatrixPolynomial dp = derivative(p);
  SpectralJacobian jac{Eigen::MatrixXd::Zero(n * k, n * k), n, k};
  for (std::size_t q = 0; q < n * k; ++q) {
    const auto& pair = decomp.pairs.at(matching[q]);
    double denom = 0.0;
    try {
      denom = checked_denominator(dp, pair, 1e-10);
    } catch (const Error& e) {
      throw Error(e.kind(), "row " + std::to_string(q + 1) + ": " + e.what());
    }
    double lpow = 1.0;
    for (std::size_t s = 0; s < k; ++s) {
      for (std::size_t r = 0; r < n; ++r) {
        jac.matrix(q, SpectralJacobian::column(n, s, r)) =
            -(lpow * pair.vector[r] * pair.vector[r]) / denom;
      }
      lpow *= pair.value;
    }
  }
  return jac;
}

namespace {

double nearest(const Eigen::VectorXd& values, double target) {
  Eigen::Index arg = 0;
  (values.array() - target).abs().minCoeff(&arg);
  return values[arg];
}

}  // namespace

SpectralJacobian jacobian_fd(const MatrixPolynomial& p, std::span<const std::size_t> matching,
                             double h, const SpectrumOptions& opts) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidInput, "finite-difference step must be positive");
  const auto n = p.dimension();
  const auto k = p.degree();
  if (matching.size() != n * k) throw Error(ErrorKind::InvalidInput, "matching must have nk rows");

  const Eigen::VectorXd base = proper_values(p, opts).values();
  SpectralJacobian jac{Eigen::MatrixXd::Zero(n * k, n * k), n, k};
  for (std::size_t s = 0; s < k; ++s) {
    for (std::size_t r = 0; r < n; ++r) {
      auto shifted = [&](double delta) {
        auto coeffs = p.coefficients();
        coeffs[s](r, r) += delta;
        return proper_values(MatrixPolynomial(std::move(coeffs)), opts).values();
      };
      const Eigen::VectorXd plus = shifted(h);
      const Eigen::VectorXd minus = shifted(-h);
      for (std::size_t q = 0; q < n * k; ++q) {
        const double b = base[static_cast<Eigen::Index>(matching[q])];
        jac.matrix(q, SpectralJacobian::column(n, s, r)) =
            (nearest(plus, b) - nearest(minus, b)) / (2.0 * h);
      }
    }
  }
  return jac;
}

double condition_number(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv[0] / smin;
}

SeedStructureCheck check_seed_structure(const SpectralJacobian& jac, const MatrixPolynomial& seed,
                                        const Eigen::VectorXd& row_values,
                                        std::span<const std::size_t> row_owner, double tol) {
  const auto n = jac.n;
  const auto k = jac.k;
  const auto nk = n * k;
  if (static_cast<std::size_t>(row_values.size()) != nk || row_owner.size() != nk) {
    throw Error(ErrorKind::InvalidInput, "seed structure check needs one value and owner per row");
  }
  const MatrixPolynomial dp = derivative(seed);
  SeedStructureCheck check;
  for (std::size_t q = 0; q < nk; ++q) {
    const double lambda = row_values[static_cast<Eigen::Index>(q)];
    const std::size_t owner = row_owner[q];
    const double row_scale = eval(dp, lambda)(owner, owner);
    double lpow = 1.0;
    for (std::size_t s = 0; s < k; ++s) {
      for (std::size_t r = 0; r < n; ++r) {
        const double entry = jac.matrix(q, SpectralJacobian::column(n, s, r));
        if (r != owner) {
          check.max_off_block = std::max(check.max_off_block, std::abs(entry));
        } else {
          const double scaled = -entry * row_scale;
          const double dev = std::abs(scaled - lpow) / std::max(1.0, std::abs(lpow));
          check.max_vandermonde_deviation = std::max(check.max_vandermonde_deviation, dev);
        }
      }
      lpow *= lambda;
    }
  }
  check.condition = condition_number(jac.matrix);
  check.passed = check.max_off_block < tol && check.max_vandermonde_deviation <= tol &&
                 std::isfinite(check.condition);
  return check;
}

}  // namespace polyinv
