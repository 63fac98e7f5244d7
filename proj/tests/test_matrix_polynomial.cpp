#include <random>

#include <gtest/gtest.h>

#include "polyinv/error.hpp"
#include "polyinv/matrix_polynomial.hpp"
#include "polyinv/seed.hpp"
#include "support.hpp"

namespace polyinv {
namespace {

using testing::error_kind_of;

MatrixPolynomial literal_seed() {
  return MatrixPolynomial({Eigen::Vector4d(8, 48, 120, 224).asDiagonal().toDenseMatrix(),
                           Eigen::Vector4d(6, 14, 22, 30).asDiagonal().toDenseMatrix(),
                           Eigen::MatrixXd::Identity(4, 4)});
}

Eigen::MatrixXd random_symmetric(std::size_t n, std::mt19937_64& rng, double spread = 1.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

// A random polynomial near a random diagonal seed, so the spectrum is real.
MatrixPolynomial random_near_seed(std::size_t n, std::size_t k, double offdiag,
                                  std::mt19937_64& rng) {
  const TargetSpectrum spec(testing::random_targets(n * k, rng), n, k);
  const MatrixPolynomial seed = seed_coefficients(spec, LeadingDiagonal(testing::random_leading(n, rng)));
  auto coeffs = seed.coefficients();
  for (std::size_t s = 0; s < k; ++s) {
    Eigen::MatrixXd p = random_symmetric(n, rng, offdiag);
    p.diagonal().setZero();
    coeffs[s] += p;
  }
  return MatrixPolynomial(std::move(coeffs));
}

TEST(MatrixPolynomial, ConstructorRejects) {
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 1.0;
  EXPECT_EQ(error_kind_of([&] { MatrixPolynomial({asym, Eigen::MatrixXd::Identity(2, 2)}); }),
            ErrorKind::InvalidInput);
  EXPECT_EQ(error_kind_of([] {
              MatrixPolynomial({Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Zero(2, 2)});
            }),
            ErrorKind::InvalidInput);
  EXPECT_EQ(error_kind_of([] {
              MatrixPolynomial({Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(3, 3)});
            }),
            ErrorKind::InvalidInput);
  EXPECT_EQ(error_kind_of([] { MatrixPolynomial(std::vector<Eigen::MatrixXd>{}); }),
            ErrorKind::InvalidInput);
  EXPECT_NO_THROW(MatrixPolynomial::zero(3));
}

TEST(Eval, SeedAtMinusTwo) {
  const Eigen::MatrixXd a = eval(literal_seed(), -2.0);
  EXPECT_EQ(a(0, 0), 0.0);
  // (z + 6)(z + 8) at z = -2
  EXPECT_EQ(a(1, 1), 24.0);
  EXPECT_EQ(a(0, 1), 0.0);
}

TEST(Eval, AtZeroIsConstantTerm) {
  std::mt19937_64 rng(7);
  const MatrixPolynomial p({random_symmetric(3, rng), random_symmetric(3, rng),
                            random_symmetric(3, rng)});
  EXPECT_EQ(eval(p, 0.0), p.coefficient(0));
}

TEST(Eval, IdentityCoefficients) {
  const Eigen::MatrixXd i3 = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_EQ(eval(MatrixPolynomial({i3, i3, i3}), 1.0), 3.0 * i3);
}

TEST(Eval, MatchesTermwiseSum) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> z(-3, 3);
  for (int t = 0; t < 50; ++t) {
    std::vector<Eigen::MatrixXd> c;
    for (int s = 0; s < 4; ++s) c.push_back(random_symmetric(3, rng));
    const MatrixPolynomial p(c);
    const double zz = z(rng);
    EXPECT_LT((eval(p, zz) - testing::eval_direct(p, zz)).norm(), 1e-12 * scale(p, zz));
  }
}

TEST(Derivative, SeedTermwise) {
  const MatrixPolynomial d = derivative(literal_seed());
  ASSERT_EQ(d.degree(), 1u);
  EXPECT_EQ(d.coefficient(1), 2.0 * Eigen::MatrixXd::Identity(4, 4));
  EXPECT_EQ(d.coefficient(0), Eigen::Vector4d(6, 14, 22, 30).asDiagonal().toDenseMatrix());
}

TEST(Derivative, ConstantGivesZero) {
  const MatrixPolynomial d = derivative(MatrixPolynomial({Eigen::MatrixXd::Identity(2, 2)}));
  EXPECT_EQ(d.degree(), 0u);
  EXPECT_EQ(d.coefficient(0), Eigen::MatrixXd::Zero(2, 2));
}

TEST(Derivative, CentralDifference) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> z(-2, 2);
  const double h = 1e-6;
  for (int t = 0; t < 30; ++t) {
    std::vector<Eigen::MatrixXd> c;
    for (int s = 0; s < 4; ++s) c.push_back(random_symmetric(3, rng));
    const MatrixPolynomial p(c);
    const double zz = z(rng);
    const Eigen::MatrixXd fd = (eval(p, zz + h) - eval(p, zz - h)) / (2 * h);
    EXPECT_LT((fd - eval(derivative(p), zz)).cwiseAbs().maxCoeff(), 1e-7 * scale(p, zz));
  }
}

TEST(Linearize, LinearIsDiagonal) {
  const Eigen::Vector3d lambda(1.5, -2.0, 4.0);
  const MatrixPolynomial p({-Eigen::MatrixXd(lambda.asDiagonal()), Eigen::MatrixXd::Identity(3, 3)});
  EXPECT_EQ(linearize(p), Eigen::MatrixXd(lambda.asDiagonal()));
}

TEST(Linearize, SeedSpectrum) {
  const Eigen::MatrixXd c = linearize(literal_seed());
  ASSERT_EQ(c.rows(), 8);
  Eigen::VectorXd mu = Eigen::EigenSolver<Eigen::MatrixXd>(c).eigenvalues().real();
  std::sort(mu.begin(), mu.end());
  for (int q = 0; q < 8; ++q) EXPECT_NEAR(mu[q], -16.0 + 2.0 * q, 1e-12);
}

TEST(Linearize, RandomSeedMatchesScalarRoots) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 25; ++t) {
    const std::size_t n = 1 + rng() % 4, k = 1 + rng() % 3;
    const Eigen::VectorXd targets = testing::random_targets(n * k, rng);
    const MatrixPolynomial seed = seed_coefficients(TargetSpectrum(targets, n, k),
                                                    LeadingDiagonal(testing::random_leading(n, rng)));
    // Oracle: bisection on each scalar diagonal polynomial.
    std::vector<double> roots;
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<double> c;
      for (std::size_t s = 0; s <= k; ++s) c.push_back(seed.coefficient(s)(r, r));
      const double lo = targets.minCoeff() - 1, hi = targets.maxCoeff() + 1;
      const int samples = 4000;
      double za = lo;
      for (int i = 1; i <= samples; ++i) {
        const double zb = lo + (hi - lo) * i / samples;
        if ((testing::horner(c, za) < 0) != (testing::horner(c, zb) < 0)) {
          roots.push_back(testing::bisect([&](double z) { return testing::horner(c, z); }, za, zb));
        }
        za = zb;
      }
    }
    ASSERT_EQ(roots.size(), n * k);
    std::sort(roots.begin(), roots.end());
    Eigen::VectorXd mu = Eigen::EigenSolver<Eigen::MatrixXd>(linearize(seed)).eigenvalues().real();
    std::sort(mu.begin(), mu.end());
    for (std::size_t q = 0; q < n * k; ++q) EXPECT_NEAR(mu[q], roots[q], 1e-10);
  }
}

TEST(Linearize, RejectsIndefiniteLeading) {
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd lead = i2;
  lead(0, 1) = lead(1, 0) = 0.1;
  EXPECT_EQ(error_kind_of([&] { linearize(MatrixPolynomial({i2, lead})); }), ErrorKind::Definiteness);
  lead = i2;
  lead(1, 1) = -1.0;
  EXPECT_EQ(error_kind_of([&] { linearize(MatrixPolynomial({i2, lead})); }), ErrorKind::Definiteness);
  EXPECT_EQ(error_kind_of([&] { proper_values(MatrixPolynomial({i2, lead})); }),
            ErrorKind::Definiteness);
}

TEST(ProperValues, SeedValuesAndUnitVectors) {
  const SpectralDecomposition d = proper_values(literal_seed());
  ASSERT_EQ(d.size(), 8u);
  for (std::size_t q = 0; q < 8; ++q) {
    const double lambda = -16.0 + 2.0 * static_cast<double>(q);
    EXPECT_NEAR(d.pairs[q].value, lambda, 1e-13);
    // -2,-4 sit on diagonal 1, -6,-8 on diagonal 2, ...
    const auto r = static_cast<Eigen::Index>((-lambda - 1) / 4);
    EXPECT_NEAR((d.pairs[q].vector - Eigen::VectorXd::Unit(4, r)).norm(), 0.0, 1e-12);
  }
}

TEST(ProperValues, LinearDiagonal) {
  const MatrixPolynomial p({-Eigen::MatrixXd(Eigen::Vector2d(3, 1).asDiagonal()),
                            Eigen::MatrixXd::Identity(2, 2)});
  const auto v = proper_values(p).values();
  EXPECT_DOUBLE_EQ(v[0], 1.0);
  EXPECT_DOUBLE_EQ(v[1], 3.0);
}

TEST(ProperValues, ReferenceReconstructions) {
  for (const auto& p : {testing::reference_chain(), testing::reference_network()}) {
    const auto v = proper_values(p).values();
    for (int q = 0; q < 8; ++q) EXPECT_NEAR(v[q], -16.0 + 2.0 * q, 1e-9);
  }
}

TEST(ProperValues, NonRealSpectrum) {
  // z^2 + 1
  const MatrixPolynomial p({Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Zero(1, 1),
                            Eigen::MatrixXd::Ones(1, 1)});
  EXPECT_EQ(error_kind_of([&] { proper_values(p); }), ErrorKind::NonRealSpectrum);
}

TEST(ProperValues, NearDegenerate) {
  const MatrixPolynomial p({-Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)});
  EXPECT_EQ(error_kind_of([&] { proper_values(p); }), ErrorKind::NearDegenerate);
}

// Residual bound, exact count, unit norm and sign convention on random
// near-diagonal polynomials.
TEST(ProperValuesProperty, ResidualCountAndNormalization) {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 5, k = 1 + rng() % 3;
    const MatrixPolynomial p = random_near_seed(n, k, 0.5, rng);
    SpectralDecomposition d;
    try {
      d = proper_values(p);
    } catch (const Error& e) {
      ASSERT_TRUE(e.kind() == ErrorKind::NonRealSpectrum || e.kind() == ErrorKind::NearDegenerate);
      continue;
    }
    ++checked;
    ASSERT_EQ(d.size(), n * k);
    for (std::size_t q = 0; q < d.size(); ++q) {
      const auto& pr = d.pairs[q];
      if (q > 0) EXPECT_GT(pr.value, d.pairs[q - 1].value);
      EXPECT_NEAR(pr.vector.norm(), 1.0, 1e-14);
      Eigen::Index arg = 0;
      pr.vector.cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(pr.vector[arg], 0.0);
      EXPECT_LE((eval(p, pr.value) * pr.vector).norm(), 1e-8 * scale(p, pr.value));
      EXPECT_LE(pr.residual, 1e-8);
    }
  }
  EXPECT_GT(checked, 150);
}

// Every returned value is bracketed by a sign change of det A(z), and the
// scan finds no extra roots.
TEST(ProperValuesProperty, DeterminantSignChanges) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng() % 3, k = 1 + rng() % 3;
    const MatrixPolynomial p = random_near_seed(n, k, 0.3, rng);
    Eigen::VectorXd v;
    try {
      v = proper_values(p).values();
    } catch (const Error&) {
      continue;
    }
    const auto roots = testing::det_roots(p, v.minCoeff() - 2.0, v.maxCoeff() + 2.0, 20000);
    ASSERT_EQ(roots.size(), n * k);
    for (std::size_t q = 0; q < n * k; ++q) EXPECT_NEAR(v[q], roots[q], 1e-8 * (1 + std::abs(v[q])));
  }
}

// det A(z) = det(A_k) det(zI - C), compared as a ratio.
TEST(ProperValuesProperty, LinearizationDeterminant) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> zdist(-5, 5);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + rng() % 3, k = 1 + rng() % 3;
    std::vector<Eigen::MatrixXd> c;
    for (std::size_t s = 0; s < k; ++s) c.push_back(random_symmetric(n, rng));
    c.push_back(testing::random_leading(n, rng).asDiagonal().toDenseMatrix());
    const MatrixPolynomial p(c);
    const Eigen::MatrixXd comp = linearize(p);
    for (int i = 0; i < 5; ++i) {
      const double z = zdist(rng);
      const double lhs = testing::det_at(p, z);
      const double rhs = p.leading().determinant() *
                         (z * Eigen::MatrixXd::Identity(n * k, n * k) - comp).determinant();
      EXPECT_NEAR(lhs / rhs, 1.0, 1e-9) << "z=" << z;
    }
  }
}

}  // namespace
}  // namespace polyinv
