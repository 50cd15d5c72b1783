#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "popwave/coupled_system.hpp"
#include "popwave/error.hpp"
#include "popwave/pde_sim.hpp"
#include "popwave/wave_builder.hpp"

using namespace popwave;

namespace {

PdeModel scalar(double D, const Polynomial& alpha) {
  Eigen::MatrixXd d(1, 1);
  d(0, 0) = D;
  return {d, MultiPolynomial::from_scalar(alpha), std::nullopt};
}

std::vector<double> sample(const Grid1D& g, auto f) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.x(i));
  return v;
}

}  // namespace

TEST(Grid, NodesAndSpacing) {
  const Grid1D g(-1.0, 1.0, 21);
  EXPECT_DOUBLE_EQ(g.dx(), 0.1);
  EXPECT_EQ(g.x(20), 1.0);
  EXPECT_THROW(Grid1D(0.0, 1.0, 8), Error);
  EXPECT_THROW(Grid1D(1.0, 0.0, 32), Error);
  EXPECT_LE(Grid1D::with_spacing(0, 1, 0.03).dx(), 0.03);
}

TEST(Grid, TrapezoidIsExactForLinear) {
  const Grid1D g(0.0, 2.0, 17);
  EXPECT_NEAR(trapezoid(g, sample(g, [](double x) { return 3 * x + 1; })), 8.0, 1e-14);
}

TEST(Pde, HeatKernelSpreads) {
  const Grid1D g(-20, 20, 801);
  const auto model = scalar(1.0, Polynomial{0.0});
  const double s0 = 1.0, t = 1.0;
  Field1D f(g, {sample(g, [&](double x) { return std::exp(-x * x / (2 * s0 * s0)); })});
  f = integrate(model, f, t, 0.9 * max_stable_dt(model, g), {});
  const double s2 = s0 * s0 + 2 * t;
  double err = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    err = std::max(err, std::abs(f.components[0][i] - s0 / std::sqrt(s2) * std::exp(-x * x / (2 * s2))));
  }
  EXPECT_LT(err, 1e-4);
  EXPECT_DOUBLE_EQ(f.time, t);
}

TEST(Pde, TransportShiftsProfile) {
  const Grid1D g(-15, 15, 1501);
  PdeModel m{Eigen::MatrixXd::Zero(1, 1), MultiPolynomial::from_scalar(Polynomial{0.0}),
             Eigen::MatrixXd::Constant(1, 1, 1.0)};
  // rho_t = rho_x moves profiles to the left at unit speed.
  Field1D f(g, {sample(g, [](double x) { return std::exp(-x * x); })});
  f = integrate(m, f, 2.0, 0.5 * max_stable_dt(m, g), {});
  double err = 0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(f.components[0][i] - std::exp(-std::pow(g.x(i) + 2.0, 2))));
  EXPECT_LT(err, 1e-3);
}

TEST(Pde, RejectsUnstableStep) {
  const Grid1D g(0, 1, 101);
  const auto model = scalar(1.0, Polynomial{0.0, 1.0, -1.0});
  Field1D f(g, {std::vector<double>(g.size(), 0.5)});
  try {
    integrate(model, f, 1.0, 1.01 * max_stable_dt(model, g), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::configuration);
  }
}

TEST(Pde, BlowUpIsReported) {
  const Grid1D g(0, 1, 33);
  const auto model = scalar(0.01, Polynomial{0.0, 0.0, 1.0});
  Field1D f(g, {std::vector<double>(g.size(), 10.0)});
  EXPECT_THROW(integrate(model, f, 5.0, 1e-3, {}), BlowUpError);
}

TEST(Pde, FixedBoundaryHoldsInitialValues) {
  const Grid1D g(-10, 10, 201);
  const auto model = scalar(1.0, Polynomial{0.0, 1.0, -1.0});
  Field1D f(g, {sample(g, [](double x) { return 0.5 * (1 + std::tanh(x)); })});
  BoundaryCondition bc{BoundaryCondition::Kind::fixed_value, {}, {}};
  f = integrate(model, f, 1.0, 0.5 * max_stable_dt(model, g), bc);
  EXPECT_DOUBLE_EQ(f.components[0].front(), 0.5 * (1 + std::tanh(-10.0)));
  EXPECT_DOUBLE_EQ(f.components[0].back(), 0.5 * (1 + std::tanh(10.0)));
}

TEST(Pde, HomogeneousLogisticMatchesOde) {
  EXPECT_LT(homogeneous_check(scalar(1.0, Polynomial{0.0, 1.0, -1.0}), {0.1}, 5.0, 1e-3), 1e-9);
  // and the ODE itself against the closed-form logistic curve
  const auto rho = integrate_ode(MultiPolynomial::from_scalar(Polynomial{0.0, 1.0, -1.0}), {0.1}, 5.0, 1e-3);
  EXPECT_NEAR(rho[0], 0.1 * std::exp(5.0) / (1 - 0.1 + 0.1 * std::exp(5.0)), 1e-10);
}

TEST(Pde, HomogeneousThreePopulation) {
  const auto p = LV3Params::symmetric(1.0);
  PdeModel m{Eigen::MatrixXd::Zero(3, 3), lv3_competition_field(p), Eigen::MatrixXd(p.D)};
  EXPECT_LT(homogeneous_check(m, {0.2, 0.3, 0.1}, 5.0, 1e-3), 1e-9);
}

TEST(Front, SingleCrossingInterpolated) {
  const Grid1D g(0, 10, 101);
  Field1D f(g, {sample(g, [](double x) { return x < 4.55 ? 1.0 : 0.0; })});
  EXPECT_NEAR(front_position(f, 0, 0.5), 4.55, 0.05);
  Field1D bump(g, {sample(g, [](double x) { return std::exp(-(x - 5) * (x - 5)); })});
  try {
    front_position(bump, 0, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::front_not_found);
  }
}

TEST(Pde, KinkTravelsAtWaveSpeed) {
  const auto k = build_kink_between({.A1 = 1.0, .A2 = 0.0});
  const auto& eq = k.solution.equation();
  const auto model = scalar(eq.physical_D(), eq.physical_alpha());
  const Grid1D g(-25, 25, 1251);
  Field1D f(g, {sample(g, [&](double x) { return k.solution(x); })});
  const double x0 = front_position(f, 0, 0.5);
  const double T = 3.0;
  f = integrate(model, f, T, 0.9 * max_stable_dt(model, g), {BoundaryCondition::Kind::fixed_value, {}, {}});
  double err = 0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(f.components[0][i] - k.solution(g.x(i) - eq.v * T)));
  EXPECT_LT(err, 1e-3);
  EXPECT_NEAR((front_position(f, 0, 0.5) - x0) / T, eq.v, 0.01 * eq.v);
}
