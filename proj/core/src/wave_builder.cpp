#include "popwave/wave_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "popwave/error.hpp"

namespace popwave {

DaggeredEquation::DaggeredEquation(double D_dag_, Polynomial alpha_dag_, double v_)
    : D_dag(D_dag_), alpha_dag(std::move(alpha_dag_)), v(v_) {
  require_finite(D_dag, "D_dag");
  require_finite(v, "wave velocity");
  if (v == 0.0) fail(ErrorKind::parameter, "wave velocity v must be nonzero");
}

DaggeredEquation DaggeredEquation::from_physical(double D, const Polynomial& alpha, double v) {
  require_finite(v, "wave velocity");
  if (v == 0.0) fail(ErrorKind::parameter, "wave velocity v must be nonzero");
  return DaggeredEquation(D / v, alpha.scaled(1.0 / v), v);
}

KinkSolution::KinkSolution(RiccatiKernel kernel, std::vector<double> series,
                           DaggeredEquation equation)
    : kernel_(kernel), series_(std::move(series)), equation_(std::move(equation)) {
  if (series_.size() < 2) fail(ErrorKind::domain, "kink series needs at least a0 and a1");
  for (double s : series_) require_finite(s, "kink series coefficient");
  const int L = static_cast<int>(equation_.alpha_dag.degree());
  if (balance_exponent(L) != P()) {
    fail(ErrorKind::no_balance, "kink series length violates P(L-1) = 2 for L = " +
                                    std::to_string(L));
  }
}

double KinkSolution::at_phi(double phi) const noexcept {
  double acc = 0.0;
  for (std::size_t i = series_.size(); i-- > 0;) acc = acc * phi + series_[i];
  return acc;
}

double KinkSolution::operator()(double xi) const { return at_phi(kernel_.phi(xi)); }

int balance_exponent(int L) {
  if (L < 2) fail(ErrorKind::no_balance, "balance requires L >= 2");
  if (2 % (L - 1) != 0) {
    fail(ErrorKind::no_balance, "P(L-1) = 2 has no integer solution for L = " + std::to_string(L));
  }
  return 2 / (L - 1);
}

// ---------------------------------------------------------------------------
// Phi-power collection

namespace {

/// Polynomial in Phi with a parallel absolute-value track.
struct TrackedPoly {
  std::vector<double> val;
  std::vector<double> mag;
};

TrackedPoly multiply(const TrackedPoly& p, const TrackedPoly& q) {
  TrackedPoly r{std::vector<double>(p.val.size() + q.val.size() - 1, 0.0),
                std::vector<double>(p.val.size() + q.val.size() - 1, 0.0)};
  for (std::size_t i = 0; i < p.val.size(); ++i) {
    for (std::size_t j = 0; j < q.val.size(); ++j) {
      r.val[i + j] += p.val[i] * q.val[j];
      r.mag[i + j] += p.mag[i] * q.mag[j];
    }
  }
  return r;
}

TrackedPoly d_dphi(const TrackedPoly& p) {
  if (p.val.size() < 2) return {{0.0}, {0.0}};
  TrackedPoly r{std::vector<double>(p.val.size() - 1), std::vector<double>(p.val.size() - 1)};
  for (std::size_t i = 1; i < p.val.size(); ++i) {
    r.val[i - 1] = static_cast<double>(i) * p.val[i];
    r.mag[i - 1] = static_cast<double>(i) * p.mag[i];
  }
  return r;
}

void accumulate(TrackedPoly& into, const TrackedPoly& p, double factor) {
  if (into.val.size() < p.val.size()) {
    into.val.resize(p.val.size(), 0.0);
    into.mag.resize(p.val.size(), 0.0);
  }
  for (std::size_t i = 0; i < p.val.size(); ++i) {
    into.val[i] += factor * p.val[i];
    into.mag[i] += std::abs(factor) * p.mag[i];
  }
}

}  // namespace

double SigmaCollection::max_abs() const noexcept {
  double m = 0.0;
  for (double s : sigma) m = std::max(m, std::abs(s));
  return m;
}

double SigmaCollection::max_relative() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double denom = std::max(scale[i], std::numeric_limits<double>::min());
    m = std::max(m, std::abs(sigma[i]) / denom);
  }
  return m;
}

SigmaCollection collect_sigma(std::span<const double> series, const RiccatiKernel& kernel,
                              const DaggeredEquation& equation) {
  if (series.empty()) fail(ErrorKind::domain, "collect_sigma needs a non-empty series");

  TrackedPoly rho{std::vector<double>(series.begin(), series.end()), {}};
  rho.mag.resize(rho.val.size());
  std::transform(rho.val.begin(), rho.val.end(), rho.mag.begin(),
                 [](double x) { return std::abs(x); });
  const TrackedPoly riccati{{kernel.c(), kernel.b(), kernel.a()},
                            {std::abs(kernel.c()), std::abs(kernel.b()), std::abs(kernel.a())}};

  const TrackedPoly d1 = multiply(d_dphi(rho), riccati);
  const TrackedPoly d2 = multiply(d_dphi(d1), riccati);

  TrackedPoly total{{0.0}, {0.0}};
  accumulate(total, d1, 1.0);
  accumulate(total, d2, equation.D_dag);

  const auto alpha = equation.alpha_dag.coefficients();
  TrackedPoly power{{1.0}, {1.0}};
  for (std::size_t n = 0; n < alpha.size(); ++n) {
    if (n > 0) power = multiply(power, rho);
    if (alpha[n] != 0.0) accumulate(total, power, alpha[n]);
  }

  const std::size_t P = series.size() - 1;
  const std::size_t L = equation.alpha_dag.degree();
  const std::size_t r = std::max(P + 2, P * L);
  total.val.resize(std::max(total.val.size(), r + 1), 0.0);
  total.mag.resize(total.val.size(), 0.0);
  // Powers above r only appear when stored trailing zeros inflate the products.
  total.val.resize(r + 1);
  total.mag.resize(r + 1);
  return {std::move(total.val), std::move(total.mag)};
}

// ---------------------------------------------------------------------------
// Closed-form constructions

namespace {

void require_nonzero(double x, const char* what) {
  require_finite(x, what);
  if (x == 0.0) fail(ErrorKind::parameter, std::string(what) + " must be nonzero");
}

}  // namespace

ImpliedKink build_quadratic_kink(const QuadraticKinkParams& p) {
  require_finite(p.b, "b");
  require_finite(p.alpha1_dag, "alpha1_dag");
  require_nonzero(p.c, "c");
  require_nonzero(p.D_dag, "D_dag");
  require_nonzero(p.alpha2_dag, "alpha2_dag");

  const double b = p.b, c = p.c, D = p.D_dag, al1 = p.alpha1_dag, al2 = p.alpha2_dag;
  const double D2 = D * D;
  const double w = 25.0 * D2 * b * b - 1.0;

  const double a = w / (100.0 * c * D2);
  RiccatiKernel kernel(a, b, c, p.xi0);

  const double alpha0 = (625.0 * al1 * al1 * D2 - 36.0) / (2500.0 * al2 * D2);
  const double a0 = -(75.0 * D2 * b * b + 30.0 * D * b - 3.0 + 25.0 * al1 * D) / (50.0 * al2 * D);
  const double a1 = -3.0 * w * (5.0 * D * b + 1.0) / (250.0 * al2 * c * D2);
  const double a2 = -3.0 * w * w / (5000.0 * al2 * c * c * D2 * D);

  DaggeredEquation eq(D, Polynomial{alpha0, al1, al2}, p.v);
  return {KinkSolution(kernel, {a0, a1, a2}, std::move(eq)), alpha0};
}

KinkSolution build_quadratic_kink_zero_alpha0(const QuadraticZeroAlpha0Params& p) {
  require_finite(p.b, "b");
  require_nonzero(p.c, "c");
  require_nonzero(p.alpha1_dag, "alpha1_dag");
  require_nonzero(p.alpha2_dag, "alpha2_dag");

  const double b = p.b, c = p.c, al1 = p.alpha1_dag, al2 = p.alpha2_dag;
  const double D = 6.0 / (25.0 * al1);
  const double w = 36.0 * b * b - 25.0 * al1 * al1;

  // a == 0 exactly when 36 b^2 = 25 alpha1^2; the kernel rejects it.
  RiccatiKernel kernel(w / (144.0 * c), b, c, p.xi0);

  const double a0 = -(36.0 * b * b + 60.0 * b * al1 + 25.0 * al1 * al1) / (100.0 * al1 * al2);
  const double a1 = -w * (6.0 * b + 5.0 * al1) / (600.0 * c * al1 * al2);
  const double a2 = -w * w / (14400.0 * c * c * al1 * al2);

  DaggeredEquation eq(D, Polynomial{0.0, al1, al2}, p.v);
  return KinkSolution(kernel, {a0, a1, a2}, std::move(eq));
}

KinkSolution build_cubic_kink_free(double a0, double a1, const RiccatiKernel& kernel,
                                   double D_dag, double v) {
  require_finite(a0, "a0");
  require_nonzero(a1, "a1");
  require_finite(D_dag, "D_dag");
  if (D_dag == 0.0) {
    fail(ErrorKind::degenerate_input,
         "cubic kink with D_dag = 0 has alpha_dag_3 = 0; the equation is not cubic");
  }
  const double a = kernel.a(), b = kernel.b(), c = kernel.c(), D = D_dag;
  const double a1sq = a1 * a1;

  const double alpha3 = -2.0 * D * a * a / a1sq;
  const double alpha2 = a * (-3.0 * D * a1 * b + 6.0 * D * a * a0 - a1) / a1sq;
  const double alpha1 = -(a1sq * b + 2.0 * D * a1sq * a * c + D * a1sq * b * b -
                          6.0 * a * a0 * D * a1 * b + 6.0 * D * a * a * a0 * a0 -
                          2.0 * a * a0 * a1) /
                        a1sq;
  const double alpha0 = (2.0 * D * a * a * a0 * a0 * a0 - 3.0 * D * a * a0 * a0 * a1 * b +
                         2.0 * D * a * a0 * a1sq * c + D * a0 * a1sq * b * b -
                         D * a1sq * a1 * b * c - a * a0 * a0 * a1 + a0 * a1sq * b -
                         a1sq * a1 * c) /
                        a1sq;

  DaggeredEquation eq(D, Polynomial{alpha0, alpha1, alpha2, alpha3}, v);
  return KinkSolution(kernel, {a0, a1}, std::move(eq));
}

ImpliedKink build_cubic_kink_constrained(const CubicConstrainedParams& p) {
  require_finite(p.alpha1_dag, "alpha1_dag");
  require_finite(p.alpha2_dag, "alpha2_dag");
  require_finite(p.b, "b");
  require_nonzero(p.alpha3_dag, "alpha3_dag");
  require_nonzero(p.D_dag, "D_dag");
  require_nonzero(p.c, "c");

  const double al1 = p.alpha1_dag, al2 = p.alpha2_dag, al3 = p.alpha3_dag;
  const double D = p.D_dag, b = p.b, c = p.c;
  const double radicand = -2.0 * al3 * D;
  if (!(radicand > 0.0)) {
    fail(ErrorKind::branch, "cubic kink needs alpha3_dag * D_dag < 0");
  }
  const double root = (p.branch == RootBranch::principal ? 1.0 : -1.0) * std::sqrt(radicand);

  const double q = 3.0 * D * D * al3 * b * b + 2.0 * al2 * al2 * D - 6.0 * al1 * al3 * D + al3;
  RiccatiKernel kernel(q / (12.0 * c * D * D * al3), b, c, p.xi0);

  const double a0 = ((3.0 * D * b + 1.0) * root - 2.0 * al2 * D) / (6.0 * D * al3);
  const double a1 = root * q / (12.0 * al3 * al3 * c * D * D);
  // sigma_0 = 0 fixes the constant term.
  const double alpha0 =
      -(al1 * a0 + al2 * a0 * a0 + al3 * a0 * a0 * a0 + a1 * c + D * a1 * b * c);

  DaggeredEquation eq(D, Polynomial{alpha0, al1, al2, al3}, p.v);
  return {KinkSolution(kernel, {a0, a1}, std::move(eq)), alpha0};
}

BoundaryReport apply_bc_quadratic(double A1, double A2, double alpha1_dag, double alpha2_dag) {
  require_finite(A1, "A1");
  require_finite(A2, "A2");
  require_finite(alpha1_dag, "alpha1_dag");
  require_nonzero(alpha2_dag, "alpha2_dag");
  const double denom = alpha1_dag + 2.0 * A1 * alpha2_dag;
  if (denom == 0.0) fail(ErrorKind::parameter, "alpha1_dag + 2 A1 alpha2_dag must be nonzero");
  const double mismatch = alpha1_dag + alpha2_dag * (A1 + A2);
  const double tol = 1e-9 * std::max(1.0, std::abs(alpha1_dag));
  return {6.0 / (25.0 * denom), std::abs(mismatch) <= tol, mismatch};
}

ImpliedKink build_kink_between(const AsymptoteKinkParams& p) {
  require_finite(p.A1, "A1");
  require_finite(p.A2, "A2");
  if (p.A1 == p.A2) fail(ErrorKind::parameter, "kink asymptotes must differ");
  require_nonzero(p.alpha2_magnitude, "alpha2 magnitude");
  const double alpha2 = std::copysign(std::abs(p.alpha2_magnitude), p.A1 - p.A2);
  const double alpha1 = -alpha2 * (p.A1 + p.A2);
  const BoundaryReport bc = apply_bc_quadratic(p.A1, p.A2, alpha1, alpha2);
  return build_quadratic_kink({.b = p.b,
                               .c = p.c,
                               .D_dag = bc.D_dag,
                               .alpha1_dag = alpha1,
                               .alpha2_dag = alpha2,
                               .xi0 = p.xi0,
                               .v = p.v});
}

double wave_residual_numeric(const KinkSolution& solution, double xi_min, double xi_max,
                             std::size_t n) {
  require_finite(xi_min, "xi_min");
  require_finite(xi_max, "xi_max");
  if (!(xi_min < xi_max)) fail(ErrorKind::domain, "wave_residual_numeric requires xi_min < xi_max");
  if (n < 16) fail(ErrorKind::domain, "wave_residual_numeric requires n >= 16");

  const double spacing = (xi_max - xi_min) / static_cast<double>(n - 1);
  // Small enough that stencil error sits well below 1e-6 for steep kinks, large enough to
  // keep cancellation in the second difference near 1e-9.
  const double h = std::min(0.5 * spacing, 1e-3);
  const auto& eq = solution.equation();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xi_min + static_cast<double>(i) * spacing;
    const double fm2 = solution(x - 2 * h), fm1 = solution(x - h), f0 = solution(x);
    const double fp1 = solution(x + h), fp2 = solution(x + 2 * h);
    const double d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    const double d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    worst = std::max(worst, std::abs(d1 + eq.D_dag * d2 + eq.alpha_dag(f0)));
  }
  return worst;
}

}  // namespace popwave
