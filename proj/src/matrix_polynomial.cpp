#include "polyinv/matrix_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>

#include "polyinv/error.hpp"

namespace polyinv {

MatrixPolynomial::MatrixPolynomial(std::vector<Eigen::MatrixXd> coefficients)
    : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw Error(ErrorKind::InvalidInput, "matrix polynomial needs a coefficient");
  n_ = static_cast<std::size_t>(coeffs_.front().rows());
  for (std::size_t s = 0; s < coeffs_.size(); ++s) {
    const auto& a = coeffs_[s];
    if (static_cast<std::size_t>(a.rows()) != n_ || static_cast<std::size_t>(a.cols()) != n_) {
      throw Error(ErrorKind::InvalidInput,
                  "coefficient " + std::to_string(s) + " is not " + std::to_string(n_) + "x" +
                      std::to_string(n_));
    }
    const double tol = 64 * std::numeric_limits<double>::epsilon() * a.cwiseAbs().maxCoeff();
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > tol) {
      throw Error(ErrorKind::InvalidInput, "coefficient " + std::to_string(s) + " is not symmetric");
    }
  }
  if (coeffs_.size() > 1 && n_ > 0 && coeffs_.back().cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorKind::InvalidInput, "leading coefficient is zero");
  }
}

MatrixPolynomial MatrixPolynomial::zero(std::size_t n) {
  return MatrixPolynomial({Eigen::MatrixXd::Zero(n, n)});
}

Eigen::VectorXd SpectralDecomposition::values() const {
  Eigen::VectorXd v(pairs.size());
  for (std::size_t q = 0; q < pairs.size(); ++q) v[q] = pairs[q].value;
  return v;
}

Eigen::MatrixXd eval(const MatrixPolynomial& p, double z) {
  const auto& c = p.coefficients();
  Eigen::MatrixXd acc = c.back();
  for (std::size_t s = c.size() - 1; s-- > 0;) acc = acc * z + c[s];
  return acc;
}

MatrixPolynomial derivative(const MatrixPolynomial& p) {
  const auto k = p.degree();
  if (k == 0) return MatrixPolynomial::zero(p.dimension());
  std::vector<Eigen::MatrixXd> d;
  d.reserve(k);
  for (std::size_t s = 1; s <= k; ++s) d.push_back(static_cast<double>(s) * p.coefficient(s));
  return MatrixPolynomial(std::move(d));
}

double scale(const MatrixPolynomial& p, double z) {
  double total = 0.0;
  double zpow = 1.0;
  for (const auto& a : p.coefficients()) {
    total += a.norm() * zpow;
    zpow *= std::abs(z);
  }
  return total;
}

Eigen::MatrixXd linearize(const MatrixPolynomial& p) {
  const auto n = static_cast<Eigen::Index>(p.dimension());
  const auto k = static_cast<Eigen::Index>(p.degree());
  if (k == 0) throw Error(ErrorKind::InvalidInput, "cannot linearize a constant polynomial");

  const auto& lead = p.leading();
  Eigen::MatrixXd off = lead;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() != 0.0 || (lead.diagonal().array() <= 0.0).any()) {
    throw Error(ErrorKind::Definiteness,
                "leading coefficient must be diagonal with a positive diagonal");
  }
  const Eigen::VectorXd inv_lead = lead.diagonal().cwiseInverse();

  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n * k, n * k);
  for (Eigen::Index b = 0; b + 1 < k; ++b) {
    c.block(b * n, (b + 1) * n, n, n).setIdentity();
  }
  for (Eigen::Index s = 0; s < k; ++s) {
    c.block((k - 1) * n, s * n, n, n) = -(inv_lead.asDiagonal() * p.coefficient(s));
  }
  return c;
}

namespace {

// Rotates a complex vector so its largest entry is real, then keeps the real part.
Eigen::VectorXd realify(const Eigen::VectorXcd& v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  const std::complex<double> phase = v[arg] / std::abs(v[arg]);
  return (v * std::conj(phase)).real();
}

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0) v = -v;
}

}  // namespace

SpectralDecomposition proper_values(const MatrixPolynomial& p, const SpectrumOptions& opts) {
  const Eigen::MatrixXd c = linearize(p);
  const auto n = static_cast<Eigen::Index>(p.dimension());
  const MatrixPolynomial dp = derivative(p);

  Eigen::EigenSolver<Eigen::MatrixXd> es(c, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "eigensolver failed on the linearization");
  }
  const Eigen::VectorXcd mu = es.eigenvalues();
  const Eigen::MatrixXcd vecs = es.eigenvectors();

  SpectralDecomposition out;
  out.pairs.reserve(static_cast<std::size_t>(mu.size()));
  for (Eigen::Index q = 0; q < mu.size(); ++q) {
    const double re = mu[q].real();
    const double im = mu[q].imag();
    if (std::abs(im) > opts.real_tol * (1.0 + std::abs(re))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "non-real proper value " << re << (im < 0 ? " - " : " + ") << std::abs(im) << "i";
      throw Error(ErrorKind::NonRealSpectrum, msg.str());
    }

    Eigen::VectorXd v = realify(vecs.col(q).head(n));
    if (v.norm() == 0.0) v = Eigen::VectorXd::Unit(n, 0);
    v.normalize();

    double lambda = re;
    const Eigen::MatrixXd a = eval(p, lambda);
    Eigen::VectorXd w = a.partialPivLu().solve(v);
    if (w.allFinite() && w.norm() > 0.0) v = w.normalized();

    const double denom = v.dot(eval(dp, lambda) * v);
    const double numer = v.dot(a * v);
    if (denom != 0.0) {
      const double corrected = lambda - numer / denom;
      if (std::isfinite(corrected) &&
          std::abs(corrected - lambda) <= 1e-6 * (1.0 + std::abs(lambda))) {
        lambda = corrected;
      }
    }
    fix_sign(v);
    const double sc = scale(p, lambda);
    const double res = (eval(p, lambda) * v).norm();
    out.pairs.push_back({lambda, std::move(v), sc > 0 ? res / sc : res});
  }

  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const ProperPair& a, const ProperPair& b) { return a.value < b.value; });

  if (out.pairs.size() > 1) {
    const double diameter = out.pairs.back().value - out.pairs.front().value;
    const double sep = opts.sep_tol_rel * diameter;
    for (std::size_t q = 1; q < out.pairs.size(); ++q) {
      const double gap = out.pairs[q].value - out.pairs[q - 1].value;
      if (gap < sep || gap == 0.0) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "proper values " << out.pairs[q - 1].value << " and " << out.pairs[q].value
            << " are not separated";
        throw Error(ErrorKind::NearDegenerate, msg.str());
      }
    }
  }
  return out;
}

}  // namespace polyinv
