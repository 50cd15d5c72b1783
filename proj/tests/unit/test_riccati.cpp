#include <cmath>

#include <gtest/gtest.h>

#include "popwave/error.hpp"
#include "popwave/riccati.hpp"

using namespace popwave;

TEST(Riccati, SolvesItsOwnEquation) {
  for (auto [a, b, c] : {std::array{1.0, 0.0, -1.0}, std::array{-0.5, 0.2, 1.0}, std::array{2.0, 3.0, 0.5}}) {
    const RiccatiKernel k(a, b, c, 0.3);
    for (double xi = -4; xi <= 4; xi += 0.5) {
      const double h = 1e-5;
      const double fd = (k.phi(xi + h) - k.phi(xi - h)) / (2 * h);
      EXPECT_NEAR(fd, k.rhs(k.phi(xi)), 1e-7);
      EXPECT_NEAR(k.dphi(xi), k.rhs(k.phi(xi)), 1e-12 * (1 + std::abs(k.dphi(xi))));
    }
  }
}

TEST(Riccati, TanhForm) {
  const RiccatiKernel k(1.0, 0.0, -1.0);
  EXPECT_DOUBLE_EQ(k.theta(), 2.0);
  for (double xi : {-1.0, 0.0, 0.4}) EXPECT_NEAR(k.phi(xi), -std::tanh(xi), 1e-15);
}

TEST(Riccati, AsymptotesAreRootsOfRhs) {
  const RiccatiKernel k(-0.5, 0.2, 1.0);
  EXPECT_NEAR(k.rhs(k.asymptote_plus()), 0.0, 1e-14);
  EXPECT_NEAR(k.rhs(k.asymptote_minus()), 0.0, 1e-14);
  EXPECT_NEAR(k.phi(40.0), k.asymptote_plus(), 1e-12);
  EXPECT_NEAR(k.phi(-40.0), k.asymptote_minus(), 1e-12);
  EXPECT_NEAR(k.phi(0.0), k.midpoint(), 1e-15);
}

TEST(Riccati, RejectsDegenerateKernels) {
  try {
    RiccatiKernel(0.0, 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_kernel);
  }
  try {
    RiccatiKernel(1.0, 0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_hyperbolic);
  }
}
