#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "popwave/error.hpp"
#include "popwave/polynomial.hpp"
#include "popwave/stochastic.hpp"

using namespace popwave;

namespace {

const Polynomial kFig2a{0, 1, -0.4, 0.2, 0, -0.5};
const Polynomial kFig2b{0, 1, 0, 0.2, 0, -0.5};
const Polynomial kFig3Solid{0.01, 0.2, 0.1, -0.05};

// max |(b/2) p' - X p + C1| with fourth-order central differences, relative to max p.
double stationary_residual(const DiffusionModel1D& m, const StationaryPdf& s) {
  const auto& g = s.density.grid;
  const auto& p = s.density.values;
  double worst = 0, peak = 0;
  for (double v : p) peak = std::max(peak, v);
  for (std::size_t i = 2; i + 2 < p.size(); ++i) {
    const double dp = (p[i - 2] - 8 * p[i - 1] + 8 * p[i + 1] - p[i + 2]) / (12 * g.dx());
    worst = std::max(worst, std::abs(0.5 * m.b * dp - m.drift(g.x(i)) * p[i] + s.C1));
  }
  return worst / peak;
}

}  // namespace

TEST(Potential, ClosedForm) {
  const DiffusionModel1D ou(Polynomial{0, -1}, 2.0);
  EXPECT_EQ(potential(ou, 0.0), 0.0);
  EXPECT_NEAR(potential(ou, 1.5), 1.125, 1e-15);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-2, 2);
  const DiffusionModel1D m(kFig2a, 2.0);
  for (int k = 0; k < 100; ++k) {
    const double x = u(gen), h = 1e-5;
    EXPECT_NEAR((potential(m, x + h) - potential(m, x - h)) / (2 * h), -m.drift(x), 1e-8);
  }
  EXPECT_NEAR(log_weight(m, 1.3), -2 * potential(m, 1.3) / m.b, 1e-14);
}

TEST(Model, RejectsBadNoise) {
  EXPECT_THROW(DiffusionModel1D(Polynomial{0, -1}, 0.0), Error);
  EXPECT_TRUE(DiffusionModel1D(kFig2a, 2).confining());
  EXPECT_FALSE(DiffusionModel1D(Polynomial{0, 1, -1}, 2).confining());
}

TEST(FullLine, StandardNormal) {
  const DiffusionModel1D ou(Polynomial{0, -1}, 2.0);
  const auto s = stationary_pdf_full_line(ou, Grid1D(-8, 8, 1601));
  double err = 0;
  for (std::size_t i = 0; i < s.density.values.size(); ++i) {
    const double x = s.density.grid.x(i);
    err = std::max(err, std::abs(s.density.values[i] - std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi)));
  }
  EXPECT_LT(err, 1e-6);
  EXPECT_NEAR(s.density.normalization, 1.0, 1e-12);
  EXPECT_EQ(s.C1, 0.0);
}

TEST(FullLine, NonConfiningDriftRejected) {
  try {
    stationary_pdf_full_line(DiffusionModel1D(Polynomial{0, 1, -1}, 2.0), Grid1D(-3, 3, 101));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_normalizable);
  }
}

TEST(FullLine, TruncationReported) {
  const auto s = stationary_pdf_full_line(DiffusionModel1D(Polynomial{0, -1}, 2.0), Grid1D(-2, 2, 101));
  EXPECT_TRUE(s.truncated());
}

// Property: extrema sit on drift roots, maxima where the drift slope is negative.
TEST(FullLine, ExtremaAreFixedPoints) {
  for (const auto& drift : {kFig2a, kFig2b}) {
    const DiffusionModel1D m(drift, 2.0);
    const auto s = stationary_pdf_full_line(m, Grid1D(-3, 3, 6001));
    const auto ex = pdf_extrema(s.density);
    const auto roots = real_roots(drift, -3, 3);
    ASSERT_EQ(ex.size(), roots.size());
    for (std::size_t i = 0; i < ex.size(); ++i) {
      EXPECT_NEAR(ex[i].x, roots[i], 1e-3);
      EXPECT_EQ(ex[i].kind == Extremum::Kind::maximum, drift.derivative()(roots[i]) < 0);
    }
    EXPECT_LT(stationary_residual(m, s), 1e-6);
  }
}

TEST(Absorbing, VanishesAtOriginAndSolvesOnceIntegratedEquation) {
  const DiffusionModel1D m(kFig2a, 2.0);
  const auto s = stationary_pdf_absorbing_origin(m, Grid1D(0, 3, 3001));
  EXPECT_EQ(s.density.values.front(), 0.0);
  EXPECT_NEAR(s.density.normalization, 1.0, 1e-12);
  EXPECT_LT(stationary_residual(m, s), 1e-6);
}

TEST(Absorbing, ZeroDriftIsLinear) {
  const double M = 2.0;
  const auto s = stationary_pdf_absorbing_origin(DiffusionModel1D(Polynomial{0.0}, 2.0), Grid1D(0, M, 201));
  for (std::size_t i = 0; i < s.density.values.size(); ++i) {
    EXPECT_NEAR(s.density.values[i], 2 * s.density.grid.x(i) / (M * M), 1e-10);
  }
}

TEST(Absorbing, RequiresGridAtOrigin) {
  EXPECT_THROW(stationary_pdf_absorbing_origin(DiffusionModel1D(kFig2a, 2.0), Grid1D(-1, 3, 101)), Error);
}

TEST(Pinned, ReducesToFullLine) {
  const DiffusionModel1D m(kFig2a, 2.0);
  const Grid1D g(-3, 3, 6001);
  const auto full = stationary_pdf_full_line(m, g);
  const auto pinned = stationary_pdf_pinned(m, full.p_at_zero, g);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(pinned.density.values[i], full.density.values[i], 1e-9);
  EXPECT_NEAR(pinned.C1, 0.0, 1e-9);
}

TEST(Pinned, ZeroPinIsAbsorbing) {
  const DiffusionModel1D m(kFig2a, 2.0);
  const Grid1D g(0, 3, 3001);
  const auto a = stationary_pdf_absorbing_origin(m, g);
  const auto p = stationary_pdf_pinned(m, 0.0, g);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(p.density.values[i], a.density.values[i], 1e-9);
  EXPECT_LT(stationary_residual(m, p), 1e-6);
}

TEST(Pinned, ResidualForIntermediatePin) {
  const DiffusionModel1D m(kFig2a, 2.0);
  const Grid1D g(0, 3, 3001);
  const auto p = stationary_pdf_pinned(m, 0.1, g);
  EXPECT_NEAR(p.density.values.front(), p.p_at_zero, 1e-12);
  EXPECT_LT(stationary_residual(m, p), 1e-6);
}

TEST(ExitTime, ZeroAtTarget) {
  const DiffusionModel1D m(kFig3Solid, 2.0);
  EXPECT_EQ(exit_time(m, 1.0, 1.0), 0.0);
  try {
    exit_time(m, 2.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

// F solves (b/2) F'' + X F' = -1, checked by finite differences on the computed curve.
TEST(ExitTime, SatisfiesBackwardEquation) {
  const DiffusionModel1D m(kFig3Solid, 2.0);
  const double h = 1e-2;
  for (double x : {0.5, 1.5, 3.0, 5.0}) {
    const auto F = exit_time_curve(m, 0.0, {x - h, x, x + h});
    const double d2 = (F[2] - 2 * F[1] + F[0]) / (h * h), d1 = (F[2] - F[0]) / (2 * h);
    EXPECT_NEAR(0.5 * m.b * d2 + m.drift(x) * d1, -1.0, 1e-3);
  }
}

TEST(ExitTime, NonConfiningDiverges) {
  try {
    exit_time(DiffusionModel1D(Polynomial{0.0, 1.0}, 2.0), 0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::divergence);
  }
}

TEST(McExit, BallisticLimit) {
  const DiffusionModel1D m(Polynomial{-10.0}, 1e-6);
  const auto r = mc_exit_time(m, 1.0, 0.0, {.dt = 1e-4, .n_paths = 200, .seed = 1});
  EXPECT_NEAR(r.mean, 0.1, 0.002);
  EXPECT_EQ(mc_exit_time(m, 0.0, 0.0, {.n_paths = 10}).mean, 0.0);
}

TEST(McExit, HorizonError) {
  const DiffusionModel1D m(Polynomial{1.0}, 1e-6);
  try {
    mc_exit_time(m, 1.0, 0.0, {.dt = 1e-2, .n_paths = 10, .horizon = 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::horizon);
  }
}

TEST(Langevin, DriftOnlyMatchesOde) {
  const DiffusionModel1D m(Polynomial{0, 1, -1}, 1e-300);
  const auto e = langevin_ensemble(m, {.x0 = 0.1, .dt = 1e-4, .t_end = 3.0, .n_paths = 1});
  const double exact = 0.1 * std::exp(3.0) / (0.9 + 0.1 * std::exp(3.0));
  EXPECT_NEAR(e.final_x[0], exact, 1e-3);
}

TEST(Langevin, OrnsteinUhlenbeckVariance) {
  const DiffusionModel1D ou(Polynomial{0, -1}, 2.0);
  const auto e = langevin_ensemble(ou, {.x0 = 0.0, .dt = 1e-3, .t_end = 1.0, .n_paths = 20000, .seed = 9});
  double s = 0, s2 = 0, s4 = 0;
  for (double x : e.final_x) {
    s += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  const double n = static_cast<double>(e.final_x.size());
  const double var = s2 / n - (s / n) * (s / n);
  const double se = std::sqrt((s4 / n - (s2 / n) * (s2 / n)) / n);
  EXPECT_NEAR(var, 1 - std::exp(-2.0), 3 * se);
}

TEST(Langevin, ThreadCountDoesNotChangeOutput) {
  const DiffusionModel1D m(kFig2a, 2.0);
  LangevinOptions o{.x0 = 0.5, .dt = 1e-3, .t_end = 0.5, .n_paths = 257, .seed = 3, .threads = 1};
  const auto a = langevin_ensemble(m, o);
  o.threads = 4;
  const auto b = langevin_ensemble(m, o);
  EXPECT_EQ(a.final_x, b.final_x);
}

TEST(Langevin, BlowUpIsFlaggedNotFatal) {
  const DiffusionModel1D m(Polynomial{0, 0, 0, 1}, 1e-4);
  const auto e = langevin_ensemble(m, {.x0 = 5.0, .dt = 1e-2, .t_end = 5.0, .n_paths = 4});
  EXPECT_EQ(e.blown, 4u);
  for (auto f : e.blown_up) EXPECT_TRUE(f);
}

TEST(Langevin, AbsorptionTimesRecorded) {
  const DiffusionModel1D m(Polynomial{-1.0}, 0.1);
  const auto e = langevin_ensemble(m, {.x0 = 1.0, .dt = 1e-3, .t_end = 5.0, .n_paths = 50, .absorb_at = 0.0});
  EXPECT_EQ(e.absorbed, 50u);
  double mean = 0;
  for (double t : e.absorption_time) mean += t / 50;
  EXPECT_NEAR(mean, 1.0, 0.1);
}

TEST(Histogram, NormalizesToDensity) {
  const auto h = histogram_density({0.1, 0.2, 0.6, 0.7, 5.0}, 0.0, 1.0, 2);
  EXPECT_DOUBLE_EQ(h.outside, 0.2);
  EXPECT_DOUBLE_EQ(h.density[0], 0.8);
  EXPECT_DOUBLE_EQ(h.density[1], 0.8);
}

TEST(Lyapunov, ZeroAtEquilibriumPositiveElsewhere) {
  const DiffusionModel1D m(kFig2a, 2.0);
  const Grid1D g(-3, 3, 601);
  const auto p0 = stationary_pdf_full_line(m, g).density;
  EXPECT_NEAR(lyapunov_H(p0, p0), 0.0, 1e-15);
  std::vector<double> u(g.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::exp(-std::pow(g.x(i) - 2.0, 2) / 0.18);
  const double mass = trapezoid(g, u);
  for (double& x : u) x /= mass;
  EXPECT_GT(lyapunov_H(DensityOnGrid(g, u), p0), 0.0);
}

TEST(Lyapunov, SupportError) {
  const Grid1D g(0, 1, 17);
  std::vector<double> p(17, 1.0), q(17, 1.0);
  q[3] = 0.0;
  try {
    lyapunov_H(DensityOnGrid(g, p), DensityOnGrid(g, q));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::support);
  }
}

TEST(FokkerPlanck, StationaryDensityStaysPut) {
  const DiffusionModel1D m(kFig2a, 2.0);
  const Grid1D g(-3, 3, 601);
  const auto p0 = stationary_pdf_full_line(m, g).density;
  const double dt = 0.4 * g.dx() * g.dx() / m.b;
  const auto tr = fp_evolve(m, p0, 1.0, dt);
  EXPECT_LT(l1_distance(tr.densities.back(), p0), 1e-8);
  EXPECT_LT(tr.max_mass_drift, 1e-10);
}

TEST(FokkerPlanck, RejectsUnstableStep) {
  const DiffusionModel1D m(kFig2a, 2.0);
  const Grid1D g(-3, 3, 301);
  const auto p0 = stationary_pdf_full_line(m, g).density;
  try {
    fp_evolve(m, p0, 1.0, 0.41 * g.dx() * g.dx() / m.b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::configuration);
  }
}

TEST(FokkerPlanck, PureDiffusionMatchesHeatKernel) {
  const DiffusionModel1D m(Polynomial{0.0}, 2.0);
  const Grid1D g(-15, 15, 601);
  std::vector<double> u(g.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::exp(-g.x(i) * g.x(i) / 2) / std::sqrt(2 * std::numbers::pi);
  const auto tr = fp_evolve(m, DensityOnGrid(g, u), 1.0, 0.4 * g.dx() * g.dx() / m.b);
  // variance 1 + b t = 3
  double err = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = g.x(i);
    err = std::max(err, std::abs(tr.densities.back().values[i] - std::exp(-x * x / 6) / std::sqrt(6 * std::numbers::pi)));
  }
  EXPECT_LT(err, 1e-4);
}
