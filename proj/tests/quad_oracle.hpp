// Quad-precision determinant bisection. Resolves proper-value shifts far
// below double rounding, so finite-difference derivatives stay accurate
// even when the derivative itself is tiny.
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "polyinv/graph.hpp"
#include "polyinv/matrix_polynomial.hpp"

namespace polyinv::testing {

using quad = __float128;

inline quad qabs(quad x) { return x < 0 ? -x : x; }

struct QuadPolynomial {
  std::size_t n = 0;
  std::vector<std::vector<quad>> coeffs;  // coeffs[s][i * n + j]

  explicit QuadPolynomial(const MatrixPolynomial& p) : n(p.dimension()) {
    for (const auto& a : p.coefficients()) {
      std::vector<quad> c(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c[i * n + j] = a(i, j);
      coeffs.push_back(std::move(c));
    }
  }

  // Adds t to the entries of the slot, both of them off the diagonal.
  QuadPolynomial perturbed(const PatternSlot& dir, quad t) const {
    QuadPolynomial q = *this;
    q.coeffs[dir.coefficient][dir.i * n + dir.j] += t;
    if (dir.i != dir.j) q.coeffs[dir.coefficient][dir.j * n + dir.i] += t;
    return q;
  }

  quad det(quad z) const {
    std::vector<quad> a(n * n, 0);
    for (std::size_t s = coeffs.size(); s-- > 0;)
      for (std::size_t e = 0; e < n * n; ++e) a[e] = a[e] * z + coeffs[s][e];
    quad d = 1;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (qabs(a[r * n + c]) > qabs(a[piv * n + c])) piv = r;
      if (a[piv * n + c] == 0) return 0;
      if (piv != c) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
        d = -d;
      }
      d *= a[c * n + c];
      for (std::size_t r = c + 1; r < n; ++r) {
        const quad f = a[r * n + c] / a[c * n + c];
        for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
      }
    }
    return d;
  }

  // Root of det in [lo, hi]; requires a sign change.
  quad root(quad lo, quad hi) const {
    quad flo = det(lo);
    for (int it = 0; it < 200; ++it) {
      const quad mid = (lo + hi) / 2;
      if (mid <= lo || mid >= hi) break;
      const quad fm = det(mid);
      if (fm == 0) return mid;
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return (lo + hi) / 2;
  }
};

// d lambda / dt of the proper value in [lambda - window, lambda + window]
// under p + t z^s E_dir: central differences at h and h/2, Richardson
// extrapolated.
inline double quad_fd_derivative(const MatrixPolynomial& p, double lambda, const PatternSlot& dir,
                                 double window, double h = 1e-8) {
  const QuadPolynomial q(p);
  const quad lo = quad(lambda) - window, hi = quad(lambda) + window;
  auto central = [&](quad step) {
    return (q.perturbed(dir, step).root(lo, hi) - q.perturbed(dir, -step).root(lo, hi)) / (2 * step);
  };
  const quad d1 = central(h), d2 = central(quad(h) / 2);
  return static_cast<double>((4 * d2 - d1) / 3);
}

}  // namespace polyinv::testing
