#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "popwave/error.hpp"
#include "popwave/polynomial.hpp"

using namespace popwave;

namespace {

// Naive power-sum evaluation, independent of the library's Horner loop.
double power_sum(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) s += c[n] * std::pow(x, static_cast<double>(n));
  return s;
}

// Plain bisection on every sign change of a fine scan.
std::vector<double> bisection_roots(const std::vector<double>& c, double lo, double hi) {
  std::vector<double> roots;
  const int cells = 20000;
  for (int i = 0; i < cells; ++i) {
    double a = lo + (hi - lo) * i / cells, b = lo + (hi - lo) * (i + 1) / cells;
    double fa = power_sum(c, a), fb = power_sum(c, b);
    if (fa == 0.0) {
      roots.push_back(a);
      continue;
    }
    if (fa * fb > 0.0 || fb == 0.0) continue;  // a root on the right edge belongs to the next cell
    for (int k = 0; k < 200; ++k) {
      const double m = 0.5 * (a + b), fm = power_sum(c, m);
      if ((fm < 0) == (fa < 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    roots.push_back(0.5 * (a + b));
  }
  return roots;
}

}  // namespace

TEST(Polynomial, EvaluatesLikePowerSum) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> c(6);
    for (double& x : c) x = u(gen);
    const Polynomial p(c);
    const double x = u(gen);
    EXPECT_NEAR(p(x), power_sum(c, x), 1e-12);
  }
}

TEST(Polynomial, CoefficientSumAtOne) {
  const Polynomial p{0, 1, -0.4, 0.2, 0, -0.5};
  EXPECT_NEAR(p(1.0), 0.3, 1e-15);
}

TEST(Polynomial, DegreeIgnoresTrailingZeros) {
  const Polynomial p{1, 2, 0, 0};
  EXPECT_EQ(p.degree(), 1u);
  EXPECT_EQ(p.leading(), 2.0);
  EXPECT_TRUE(Polynomial{}.is_zero());
}

TEST(Polynomial, DerivativeMatchesCentralDifference) {
  const Polynomial p{1.2936, -7.2436, 14.58, -13.63, 6, -1};
  const Polynomial d = p.derivative();
  for (double x : {-1.0, 0.3, 1.7, 2.5}) {
    const double h = 1e-5;
    EXPECT_NEAR(d(x), (p(x + h) - p(x - h)) / (2 * h), 1e-6);
  }
  EXPECT_NEAR(p.antiderivative().derivative()(0.7), p(0.7), 1e-13);
}

TEST(Polynomial, RejectsNonFinite) {
  EXPECT_THROW(Polynomial({1.0, NAN}), Error);
}

TEST(RealRoots, MatchBisectionOracle) {
  const std::vector<std::vector<double>> cases{
      {0, 1, 0, 0.2, 0, -0.5},
      {0, 1, -0.4, 0.2, 0, -0.5},
      {1.2936, -7.2436, 14.58, -13.63, 6, -1},
  };
  for (const auto& c : cases) {
    const auto expected = bisection_roots(c, -3.0, 3.0);
    const auto got = real_roots(Polynomial(c), -3.0, 3.0);
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-9);
  }
}

TEST(RealRoots, SymmetricQuinticHasThreeRoots) {
  const auto r = real_roots(Polynomial{0, 1, 0, 0.2, 0, -0.5}, -3.0, 3.0);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0], -r[2], 1e-12);
  EXPECT_NEAR(r[1], 0.0, 1e-12);
}

TEST(RealRoots, ZeroPolynomialIsDegenerate) {
  EXPECT_THROW(real_roots(Polynomial{0, 0}, -1, 1), Error);
}

TEST(Holling, TaylorCoefficientsApproximateResponse) {
  const double a = 0.8, h = 0.5;
  const Polynomial p = holling2_taylor(a, h, 12);
  const double x = 0.3;  // |a h x| = 0.12, series converges fast
  EXPECT_NEAR(p(x), a * x / (1 + a * h * x), 1e-10);
  EXPECT_EQ(p.coefficient(0), 0.0);
  EXPECT_DOUBLE_EQ(p.coefficient(1), a);
}

TEST(MultiPolynomial, ScalarFieldAgreesWithPolynomial) {
  const Polynomial p{0.5, -1, 2};
  const auto f = MultiPolynomial::from_scalar(p);
  const double rho = 0.7;
  EXPECT_NEAR(f(std::span<const double>(&rho, 1))[0], p(rho), 1e-15);
}

TEST(MultiPolynomial, SparseTwoComponentField) {
  // f1 = 2 x y, f2 = -y^2 + 3
  const MultiPolynomial f(2, {{{1, 1}, 0, 2.0}, {{0, 2}, 1, -1.0}, {{0, 0}, 1, 3.0}});
  const std::vector<double> rho{1.5, -2.0};
  const auto out = f(rho);
  EXPECT_DOUBLE_EQ(out[0], -6.0);
  EXPECT_DOUBLE_EQ(out[1], -1.0);
}
