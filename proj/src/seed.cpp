#include "polyinv/seed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "polyinv/error.hpp"

namespace polyinv {

TargetSpectrum::TargetSpectrum(Eigen::VectorXd values, std::size_t n, std::size_t k,
                               double sep_tol_rel)
    : values_(std::move(values)), n_(n), k_(k) {
  if (n == 0 || k == 0) throw Error(ErrorKind::InvalidInput, "n and k must be positive");
  if (size() != n * k) {
    throw Error(ErrorKind::InvalidInput, "expected n*k = " + std::to_string(n * k) +
                                             " proper values, got " + std::to_string(size()));
  }
  if (!values_.allFinite()) throw Error(ErrorKind::InvalidInput, "proper values must be finite");
  const Eigen::VectorXd s = sorted();
  const double sep = sep_tol_rel * diameter();
  for (Eigen::Index q = 1; q < s.size(); ++q) {
    const double gap = s[q] - s[q - 1];
    if (gap <= sep || gap == 0.0) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "proper values must be distinct: " << s[q - 1] << " and " << s[q];
      throw Error(ErrorKind::InvalidInput, msg.str());
    }
  }
}

Eigen::VectorXd TargetSpectrum::sorted() const {
  Eigen::VectorXd s = values_;
  std::sort(s.begin(), s.end());
  return s;
}

double TargetSpectrum::diameter() const { return values_.maxCoeff() - values_.minCoeff(); }

LeadingDiagonal::LeadingDiagonal(Eigen::VectorXd alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() == 0) throw Error(ErrorKind::InvalidInput, "leading diagonal is empty");
  for (Eigen::Index t = 0; t < alpha_.size(); ++t) {
    if (!(alpha_[t] > 0.0) || !std::isfinite(alpha_[t])) {
      throw Error(ErrorKind::InvalidInput, "leading diagonal entry " + std::to_string(t + 1) +
                                               " must be positive");
    }
  }
}

std::vector<double> elementary_symmetric_all(std::span<const double> roots) {
  std::vector<double> e(roots.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t m = 0; m < roots.size(); ++m) {
    for (std::size_t j = m + 1; j >= 1; --j) e[j] += roots[m] * e[j - 1];
  }
  return e;
}

double elementary_symmetric(std::span<const double> roots, std::size_t j) {
  if (j > roots.size()) {
    throw Error(ErrorKind::InvalidInput, "elementary symmetric index " + std::to_string(j) +
                                             " exceeds root count " +
                                             std::to_string(roots.size()));
  }
  return elementary_symmetric_all(roots)[j];
}

std::vector<std::size_t> block_assignment(const TargetSpectrum& spec, Grouping grouping) {
  const auto nk = spec.size();
  const auto k = spec.degree();
  std::vector<std::size_t> order(nk);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (grouping != Grouping::InputOrder) {
    const auto& v = spec.values();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  }
  std::vector<std::size_t> owner(nk);
  for (std::size_t pos = 0; pos < nk; ++pos) {
    owner[order[pos]] = grouping == Grouping::Interleaved ? pos % spec.dimension() : pos / k;
  }
  return owner;
}

std::string_view to_string(Grouping grouping) {
  switch (grouping) {
    case Grouping::InputOrder: return "input";
    case Grouping::Ascending: return "ascending";
    case Grouping::Interleaved: return "interleaved";
  }
  return "input";
}

std::optional<Grouping> grouping_from_string(std::string_view name) {
  for (Grouping g : {Grouping::InputOrder, Grouping::Ascending, Grouping::Interleaved}) {
    if (name == to_string(g)) return g;
  }
  return std::nullopt;
}

namespace {

// roots[r] lists the targets assigned to diagonal r, in input order.
std::vector<std::vector<double>> grouped_roots(const TargetSpectrum& spec, Grouping grouping) {
  const auto owner = block_assignment(spec, grouping);
  std::vector<std::vector<double>> roots(spec.dimension());
  for (std::size_t q = 0; q < owner.size(); ++q) roots[owner[q]].push_back(spec.values()[q]);
  return roots;
}

}  // namespace

Eigen::VectorXd seed_diagonals(const TargetSpectrum& spec, const LeadingDiagonal& lead,
                               Grouping grouping) {
  const auto n = spec.dimension();
  const auto k = spec.degree();
  if (lead.size() != n) {
    throw Error(ErrorKind::InvalidInput, "leading diagonal has length " +
                                             std::to_string(lead.size()) + ", expected " +
                                             std::to_string(n));
  }
  const auto roots = grouped_roots(spec, grouping);
  Eigen::VectorXd x(n * k);
  for (std::size_t t = 0; t < n; ++t) {
    const auto e = elementary_symmetric_all(roots[t]);
    for (std::size_t s = 0; s < k; ++s) {
      const double sign = ((k - s) % 2 == 0) ? 1.0 : -1.0;
      x[s * n + t] = sign * lead.values()[t] * e[k - s];
    }
  }
  return x;
}

MatrixPolynomial seed_coefficients(const TargetSpectrum& spec, const LeadingDiagonal& lead,
                                   Grouping grouping) {
  const auto n = spec.dimension();
  const auto k = spec.degree();
  const Eigen::VectorXd x = seed_diagonals(spec, lead, grouping);
  std::vector<Eigen::MatrixXd> coeffs;
  coeffs.reserve(k + 1);
  for (std::size_t s = 0; s < k; ++s) {
    coeffs.push_back(x.segment(s * n, n).asDiagonal().toDenseMatrix());
  }
  coeffs.push_back(lead.values().asDiagonal().toDenseMatrix());
  return MatrixPolynomial(std::move(coeffs));
}

}  // namespace polyinv
