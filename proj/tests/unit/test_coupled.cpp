#include <array>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "popwave/coupled_system.hpp"
#include "popwave/error.hpp"

using namespace popwave;

namespace {

// The nine residual equations written out term by term, exactly as in the reference listing.
std::array<double, 9> listing(const LV3Params& p, const CoupledUnknowns& u) {
  const auto& [a0, a1, b0, b1, c0, c1, a, b, c, v] = u;
  auto r = [&](int i) { return p.r(i - 1); };
  auto al = [&](int i, int j) { return p.A(i - 1, j - 1); };
  auto D = [&](int i, int j) { return p.D(i - 1, j - 1); };
  return {
      -D(1, 3) * c1 * a - (v + D(1, 1)) * a1 * a - r(1) * al(1, 2) * a1 * b1 + r(1) * al(1, 1) * a1 * a1 -
          D(1, 2) * b1 * a - r(1) * al(1, 3) * a1 * c1,
      -r(1) * al(1, 2) * a0 * b1 - r(1) * al(1, 2) * a1 * b0 + 2 * r(1) * al(1, 1) * a0 * a1 -
          r(1) * al(1, 3) * a0 * c1 - r(1) * al(1, 3) * a1 * c0 - r(1) * a1 - D(1, 3) * c1 * b -
          D(1, 2) * b1 * b - (v + D(1, 1)) * a1 * b,
      -(v + D(1, 1)) * a1 * c - r(1) * al(1, 2) * a0 * b0 - D(1, 3) * c1 * c - D(1, 2) * b1 * c -
          r(1) * al(1, 3) * a0 * c0 - r(1) * a0 + r(1) * al(1, 1) * a0 * a0,
      -D(2, 3) * c1 * a - D(2, 1) * a1 * a - r(2) * al(2, 2) * b1 * b1 + r(2) * al(2, 1) * a1 * b1 -
          (v + D(2, 2)) * b1 * a - r(2) * al(2, 3) * b1 * c1,
      -2 * r(2) * al(2, 2) * b0 * b1 + r(2) * al(2, 1) * a0 * b1 + r(2) * al(2, 1) * a1 * b0 -
          r(2) * al(2, 3) * b0 * c1 - r(2) * al(2, 3) * b1 * c0 - r(2) * b1 - D(2, 3) * c1 * b -
          (v + D(2, 2)) * b1 * b - D(2, 1) * a1 * b,
      -D(2, 1) * a1 * c - r(2) * al(2, 2) * b0 * b0 - D(2, 3) * c1 * c - (v + D(2, 2)) * b1 * c -
          r(2) * al(2, 3) * b0 * c0 - r(2) * b0 + r(2) * al(2, 1) * a0 * b0,
      -(v + D(3, 3)) * c1 * a - D(3, 1) * a1 * a - r(3) * al(3, 2) * b1 * c1 + r(3) * al(3, 1) * a1 * c1 -
          D(3, 2) * b1 * a - r(3) * al(3, 3) * c1 * c1,
      -r(3) * al(3, 2) * b0 * c1 - r(3) * al(3, 2) * b1 * c0 + r(3) * al(3, 1) * a0 * c1 +
          r(3) * al(3, 1) * a1 * c0 - 2 * r(3) * al(3, 3) * c0 * c1 - r(3) * c1 - (v + D(3, 3)) * c1 * b -
          D(3, 2) * b1 * b - D(3, 1) * a1 * b,
      -D(3, 1) * a1 * c - r(3) * al(3, 2) * b0 * c0 - (v + D(3, 3)) * c1 * c - D(3, 2) * b1 * c -
          r(3) * al(3, 3) * c0 * c0 - r(3) * c0 + r(3) * al(3, 1) * a0 * c0,
  };
}

double sup(const std::array<double, 9>& r) {
  double m = 0;
  for (double x : r) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(Coupled, ResidualsMatchListingForArbitraryInputs) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    LV3Params p;
    for (int i = 0; i < 3; ++i) {
      p.r(i) = u(gen);
      for (int k = 0; k < 3; ++k) {
        p.A(i, k) = u(gen);
        p.D(i, k) = u(gen);
      }
    }
    CoupledUnknowns x;
    for (std::size_t i = 0; i < CoupledUnknowns::size; ++i) x[i] = u(gen);
    const auto got = build_residuals(p, x), want = listing(p, x);
    for (int i = 0; i < 9; ++i) EXPECT_NEAR(got[i], want[i], 1e-12) << i;
  }
}

TEST(Coupled, ClosedFormIsARoot) {
  const auto s = closed_form(1.0, 2.0, 0.5, 1.0, 1.0);
  EXPECT_LT(sup(listing(s.params, s.unknowns)), 1e-13);
  EXPECT_DOUBLE_EQ(s.unknowns.c1, -3.0);
}

// Property: the travelling profile satisfies the wave ODE  -(v I + D) rho' = f(rho) pointwise.
TEST(Coupled, ProfileSolvesWaveEquation) {
  const auto s = closed_form(0.7, 1.3, 0.4, 0.8, 1.2, 0.5);
  for (double xi = -6; xi <= 6; xi += 0.5) {
    const double h = 1e-5;
    const auto rp = s(xi + h), rm = s(xi - h), r0 = s(xi);
    const auto f = lv3_wave_reaction(s.params, r0);
    for (int i = 0; i < 3; ++i) {
      double lhs = -s.unknowns.v * (rp[i] - rm[i]) / (2 * h);
      for (int k = 0; k < 3; ++k) lhs -= s.params.D(i, k) * (rp[k] - rm[k]) / (2 * h);
      EXPECT_NEAR(lhs, f[i], 1e-7);
    }
  }
}

TEST(Coupled, LimitsAreFixedPointsOfReaction) {
  const auto s = closed_form(1.0, 2.0, 0.5, 1.0, 1.0);
  for (const auto& lim : {s.limit_plus(), s.limit_minus()}) {
    for (double f : lv3_wave_reaction(s.params, lim)) EXPECT_NEAR(f, 0.0, 1e-12);
  }
}

TEST(Newton, RecoversPerturbedRoot) {
  const auto s = closed_form(1.0, 2.0, 0.5, 1.0, 1.0);
  CoupledUnknowns guess = s.unknowns;
  const NewtonOptions opt;
  for (std::size_t idx : opt.free) guess[idx] += 0.01;
  const auto r = newton_solve(s.params, guess, opt);
  EXPECT_LT(r.residual_norm, 1e-10);
  EXPECT_LE(r.iterations, 25);
  for (std::size_t i = 0; i < CoupledUnknowns::size; ++i) EXPECT_NEAR(r.unknowns[i], s.unknowns[i], 1e-8);
}

TEST(Newton, RankDeficientWhenAllUnknownsFree) {
  const auto s = closed_form(1.0, 2.0, 0.5, 1.0, 1.0);
  NewtonOptions opt;
  opt.free = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  CoupledUnknowns guess = s.unknowns;
  guess.v += 0.1;
  try {
    newton_solve(s.params, guess, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::linear_solve);
  }
}

TEST(Newton, ReportsNonConvergence) {
  const auto s = closed_form(1.0, 2.0, 0.5, 1.0, 1.0);
  NewtonOptions opt;
  opt.max_iter = 1;
  CoupledUnknowns guess = s.unknowns;
  for (std::size_t idx : opt.free) guess[idx] += 0.3;
  EXPECT_THROW(newton_solve(s.params, guess, opt), NonConvergenceError);
}

TEST(Newton, MultiStartIndependentOfThreads) {
  const auto s = closed_form(1.0, 2.0, 0.5, 1.0, 1.0);
  MultiStartOptions m;
  m.starts = 6;
  m.seed = 42;
  m.threads = 1;
  const auto one = newton_multi_start(s.params, s.unknowns, {}, m);
  m.threads = 3;
  const auto three = newton_multi_start(s.params, s.unknowns, {}, m);
  ASSERT_EQ(one.size(), three.size());
  ASSERT_FALSE(one.empty());
  for (std::size_t k = 0; k < one.size(); ++k) {
    EXPECT_EQ(one[k].unknowns.to_array(), three[k].unknowns.to_array());
  }
}

TEST(LV3, FieldsAgreeWithDirectEvaluation) {
  LV3Params p;
  p.r << 1.0, 0.5, 2.0;
  p.A << 1, 0.2, 0.3, 0.4, 1, 0.6, 0.7, 0.8, 1;
  const std::array<double, 3> rho{0.3, 0.2, 0.5};
  const auto wave = lv3_wave_field(p)(rho);
  const auto direct = lv3_wave_reaction(p, rho);
  const auto comp = lv3_competition_field(p)(rho);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(wave[i], direct[i], 1e-15);
    const double s = p.A(i, 0) * rho[0] + p.A(i, 1) * rho[1] + p.A(i, 2) * rho[2];
    EXPECT_NEAR(comp[i], p.r(i) * rho[i] * (1 - s), 1e-15);
  }
}
