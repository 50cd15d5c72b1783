#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "popwave/grid.hpp"
#include "popwave/polynomial.hpp"

namespace popwave {

/// N population densities sampled on a grid at one instant.
struct Field1D {
  Grid1D grid;
  std::vector<std::vector<double>> components;
  double time = 0.0;

  /// Throws ErrorKind::domain on length mismatch or non-finite values.
  Field1D(Grid1D grid, std::vector<std::vector<double>> components, double time = 0.0);

  std::size_t populations() const noexcept { return components.size(); }
};

/// rho_t = D rho_xx + T rho_x + reaction(rho), all matrices N x N.
struct PdeModel {
  Eigen::MatrixXd diffusion;
  MultiPolynomial reaction;
  /// First-order transport; absent means zero.
  std::optional<Eigen::MatrixXd> transport;

  std::size_t populations() const noexcept { return reaction.populations(); }
  void validate() const;
};

struct BoundaryCondition {
  enum class Kind { fixed_value, zero_gradient };
  Kind kind = Kind::zero_gradient;
  /// Per-component boundary values for fixed_value; when empty the values present in the
  /// field at the start of integration are held.
  std::vector<double> left, right;
};

/// Stable step bound for the explicit scheme on this grid: the smaller of
/// 0.4 dx^2 / max|eig(D)| and 2 dx / max|eig(T)| (infinity when both vanish).
double max_stable_dt(const PdeModel& model, const Grid1D& grid);

/// Semi-discrete right-hand side with second-order central differences.
std::vector<std::vector<double>> semi_discrete_rhs(const PdeModel& model, const Field1D& field,
                                                   const BoundaryCondition& bc);

/// Advances `field` to `t_end` with classical RK4. The step actually used is t_span / ceil(t_span / dt).
/// Throws ErrorKind::configuration if dt exceeds max_stable_dt, BlowUpError on a non-finite state.
Field1D integrate(const PdeModel& model, Field1D field, double t_end, double dt,
                  const BoundaryCondition& bc);

/// Linearly interpolated x where component `component` crosses `level`.
/// Throws ErrorKind::front_not_found unless there is exactly one crossing.
double front_position(const Field1D& field, std::size_t component, double level);

/// Max over components of |PDE(constant field) - ODE(rho0)| at t_end, both integrated with the
/// same RK4 step.
double homogeneous_check(const PdeModel& model, const std::vector<double>& rho0, double t_end,
                         double dt);

/// RK4 integration of d rho/dt = reaction(rho).
std::vector<double> integrate_ode(const MultiPolynomial& reaction, std::vector<double> rho,
                                  double t_span, double dt);

}  // namespace popwave
