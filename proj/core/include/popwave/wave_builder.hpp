#pragma once

#include <span>
#include <vector>

#include "popwave/polynomial.hpp"
#include "popwave/riccati.hpp"

namespace popwave {

/// Travelling-wave form of  rho_t - D rho_xx = sum alpha_n rho^n  in xi = x - v t:
///   rho' + D_dag rho'' + sum alpha_dag_n rho^n = 0,   D_dag = D/v,  alpha_dag = alpha/v.
/// (Dividing -v rho' - D rho'' - sum alpha_n rho^n = 0 by -v; the often-quoted D_dag = -D/v
/// belongs to rho_t + D rho_xx and is not used here.)
struct DaggeredEquation {
  double D_dag = 0.0;
  Polynomial alpha_dag;
  double v = 1.0;

  DaggeredEquation(double D_dag, Polynomial alpha_dag, double v);

  static DaggeredEquation from_physical(double D, const Polynomial& alpha, double v);
  double physical_D() const noexcept { return v * D_dag; }
  Polynomial physical_alpha() const { return alpha_dag.scaled(v); }
};

/// rho(xi) = sum_i series[i] Phi(xi)^i with Phi from `kernel`.
class KinkSolution {
 public:
  /// Enforces the balance law P (L - 1) = 2, L = degree of the daggered reaction term.
  KinkSolution(RiccatiKernel kernel, std::vector<double> series, DaggeredEquation equation);

  const RiccatiKernel& kernel() const noexcept { return kernel_; }
  std::span<const double> series() const noexcept { return series_; }
  const DaggeredEquation& equation() const noexcept { return equation_; }
  int P() const noexcept { return static_cast<int>(series_.size()) - 1; }

  double operator()(double xi) const;
  /// Series evaluated at a given Phi value.
  double at_phi(double phi) const noexcept;
  double limit_plus() const noexcept { return at_phi(kernel_.asymptote_plus()); }
  double limit_minus() const noexcept { return at_phi(kernel_.asymptote_minus()); }

 private:
  RiccatiKernel kernel_;
  std::vector<double> series_;
  DaggeredEquation equation_;
};

/// A construction that also determines the constant term alpha_dag_0.
struct ImpliedKink {
  KinkSolution solution;
  double implied_alpha0_dag;
};

/// P from P (L - 1) = 2. Throws ErrorKind::no_balance when L < 2 or 2/(L-1) is not integral.
int balance_exponent(int L);

/// Phi-power coefficients sigma_0..sigma_r of the travelling-wave residual.
///
/// `scale[i]` is the same expansion carried out with absolute values, i.e. the
/// magnitude of the largest cancelling contributions; it is the yardstick for
/// relative nullity checks.
struct SigmaCollection {
  std::vector<double> sigma;
  std::vector<double> scale;

  double max_abs() const noexcept;
  /// max_i |sigma_i| / max(scale_i, tiny).
  double max_relative() const noexcept;
};

/// Substitutes rho = sum a_i Phi^i into rho' + D_dag rho'' + sum alpha_dag_n rho^n,
/// rewriting d(Phi^i)/dxi = i Phi^(i-1) (a Phi^2 + b Phi + c). The result has
/// r + 1 = max(P + 2, P L) + 1 entries.
SigmaCollection collect_sigma(std::span<const double> series, const RiccatiKernel& kernel,
                              const DaggeredEquation& equation);

struct QuadraticKinkParams {
  double b = 0.0;
  double c = 1.0;
  double D_dag = 0.0;
  double alpha1_dag = 0.0;
  double alpha2_dag = 0.0;
  double xi0 = 0.0;
  double v = 1.0;
};

/// P = L = 2 with alpha_dag_0 != 0. The Riccati a and alpha_dag_0 are outputs:
///   a = (25 D^2 b^2 - 1)/(100 c D^2),  alpha_dag_0 = (625 alpha1^2 D^2 - 36)/(2500 alpha2 D^2),
/// and theta^2 = 1/(25 D^2) for every admissible input.
ImpliedKink build_quadratic_kink(const QuadraticKinkParams& p);

struct QuadraticZeroAlpha0Params {
  double b = 0.0;
  double c = 1.0;
  double alpha1_dag = 0.0;
  double alpha2_dag = 0.0;
  double xi0 = 0.0;
  double v = 1.0;
};

/// P = L = 2 with alpha_dag_0 = 0, which forces D_dag = 6/(25 alpha1_dag) and
/// a = (36 b^2 - 25 alpha1^2)/(144 c).
KinkSolution build_quadratic_kink_zero_alpha0(const QuadraticZeroAlpha0Params& p);

/// P = 1, L = 3 with the series and kernel free; returns the solution whose equation
/// carries the four alpha_dag_0..3 that make it exact (alpha_dag_3 = -2 D a^2 / a1^2).
KinkSolution build_cubic_kink_free(double a0, double a1, const RiccatiKernel& kernel,
                                   double D_dag, double v);

enum class RootBranch { principal, conjugate };

struct CubicConstrainedParams {
  double alpha1_dag = 0.0;
  double alpha2_dag = 0.0;
  double alpha3_dag = 0.0;
  double D_dag = 0.0;
  double b = 0.0;
  double c = 1.0;
  double xi0 = 0.0;
  double v = 1.0;
  /// Sign of sqrt(-2 alpha3 D); both signs solve the sigma system.
  RootBranch branch = RootBranch::principal;
};

/// P = 1, L = 3 with alpha_dag_1..3 and D_dag given; solves for a, a0, a1 and alpha_dag_0.
/// Requires alpha3_dag * D_dag < 0.
ImpliedKink build_cubic_kink_constrained(const CubicConstrainedParams& p);

struct BoundaryReport {
  double D_dag;
  bool consistent;
  /// alpha1 + alpha2 (A1 + A2); zero when the asymptote pair is admissible.
  double mismatch;
};

/// Relations imposed on the quadratic kink by rho(+inf) = A1, rho(-inf) = A2:
///   D_dag = 6 / (25 (alpha1 + 2 A1 alpha2)),  alpha1 = -alpha2 (A1 + A2).
BoundaryReport apply_bc_quadratic(double A1, double A2, double alpha1_dag, double alpha2_dag);

struct AsymptoteKinkParams {
  double A1 = 1.0;
  double A2 = 0.0;
  /// |alpha2_dag|; its sign is chosen so that D_dag > 0, which is what puts A1 at +inf
  /// with the positive-theta convention.
  double alpha2_magnitude = 1.0;
  double b = 0.0;
  double c = 1.0;
  double xi0 = 0.0;
  /// Positive v keeps the physical diffusion v D_dag positive.
  double v = 1.0;
};

/// Quadratic kink joining A2 (xi -> -inf) to A1 (xi -> +inf).
ImpliedKink build_kink_between(const AsymptoteKinkParams& p);

/// Sup over an n-node grid of |rho' + D_dag rho'' + sum alpha_dag_n rho^n| with
/// fourth-order central differences with step min(spacing / 2, 1e-3).
double wave_residual_numeric(const KinkSolution& solution, double xi_min, double xi_max,
                             std::size_t n);

}  // namespace popwave
