#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "popwave/polynomial.hpp"
#include "popwave/riccati.hpp"

namespace popwave {

/// Three competing populations with first-order transport coupling:
///   d rho_i/dt - sum_k D_ik d rho_k/dx = r_i rho_i (1 - A_i1 rho_1 + A_i2 rho_2 + A_i3 rho_3)
///
/// The sign pattern of the reaction term (only the rho_1 interaction enters with a minus)
/// is the one under which the linear-in-Phi ansatz closes; see lv3_wave_reaction().
struct LV3Params {
  Eigen::Vector3d r = Eigen::Vector3d::Ones();
  Eigen::Matrix3d A = Eigen::Matrix3d::Ones();
  Eigen::Matrix3d D = Eigen::Matrix3d::Ones();

  /// All r = 1, all A = 1, D symmetric with unit off-diagonals and D_22 = D_33 = D_11.
  static LV3Params symmetric(double D11);
  /// Throws ErrorKind::domain for non-finite entries.
  void validate() const;
};

/// Unknown vector in the fixed order (a0, a1, b0, b1, c0, c1, a, b, c, v).
struct CoupledUnknowns {
  double a0 = 0, a1 = 0, b0 = 0, b1 = 0, c0 = 0, c1 = 0;
  double a = 0, b = 0, c = 0, v = 0;

  static constexpr std::size_t size = 10;
  static constexpr std::array<const char*, size> names = {"a0", "a1", "b0", "b1", "c0",
                                                          "c1", "a",  "b",  "c",  "v"};

  std::array<double, size> to_array() const noexcept {
    return {a0, a1, b0, b1, c0, c1, a, b, c, v};
  }
  static CoupledUnknowns from_array(const std::array<double, size>& x) noexcept {
    return {x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7], x[8], x[9]};
  }
  double& operator[](std::size_t i) noexcept;
  double operator[](std::size_t i) const noexcept;
};

/// The nine Phi^2, Phi^1, Phi^0 coefficients of the travelling-wave residual, ordered
/// population 1 (Phi^2, Phi, 1), population 2 (...), population 3 (...).
std::array<double, 9> build_residuals(const LV3Params& params, const CoupledUnknowns& u);

struct CoupledKinkSolution {
  CoupledUnknowns unknowns;
  RiccatiKernel kernel;
  LV3Params params;

  /// (rho_1, rho_2, rho_3) at xi.
  std::array<double, 3> operator()(double xi) const;
  std::array<double, 3> limit_plus() const;
  std::array<double, 3> limit_minus() const;
};

/// Closed-form kink of the symmetric configuration LV3Params::symmetric(D11).
/// Free parameters a1, b1, c0, b; c1 = -(a1 + b1).
CoupledKinkSolution closed_form(double a1, double b1, double c0, double b, double D11,
                                double xi0 = 0.0);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  /// Indices (in CoupledUnknowns order) that are iterated on; the rest are held at the guess.
  /// The residual map has a 4-parameter family of roots for the symmetric configuration,
  /// so a square-ish subset is needed for a well-conditioned Jacobian.
  std::vector<std::size_t> free = {0, 2, 5, 6, 8, 9};
  /// Columns whose QR pivot falls below rank_tol * largest are treated as rank loss.
  double rank_tol = 1e-12;
};

struct NewtonResult {
  CoupledUnknowns unknowns;
  double residual_norm = 0;
  int iterations = 0;
};

/// Damped Gauss-Newton with a forward-difference Jacobian and step-halving line search.
/// Throws ErrorKind::linear_solve on a rank-deficient Jacobian and NonConvergenceError
/// after max_iter iterations.
NewtonResult newton_solve(const LV3Params& params, const CoupledUnknowns& guess,
                          const NewtonOptions& options = {});

struct MultiStartOptions {
  std::size_t starts = 8;
  double amplitude = 1e-2;
  std::uint64_t seed = 0;
  /// Roots closer than this in the max norm are merged.
  double dedupe = 1e-6;
  unsigned threads = 1;
};

/// Runs newton_solve from `starts` uniformly perturbed copies of `guess`; failed starts are
/// dropped. Returns the distinct roots sorted lexicographically by unknown vector.
std::vector<NewtonResult> newton_multi_start(const LV3Params& params, const CoupledUnknowns& guess,
                                             const NewtonOptions& options,
                                             const MultiStartOptions& multi);

/// Reaction terms of the coupled system at (rho_1, rho_2, rho_3).
std::array<double, 3> lv3_wave_reaction(const LV3Params& params, const std::array<double, 3>& rho);

/// Same reaction as a sparse polynomial field (for the PDE simulator).
MultiPolynomial lv3_wave_field(const LV3Params& params);

/// Conventional competitive Lotka-Volterra field r_i rho_i (1 - sum_k A_ik rho_k).
MultiPolynomial lv3_competition_field(const LV3Params& params);

}  // namespace popwave
