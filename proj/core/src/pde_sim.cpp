#include "popwave/pde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "popwave/error.hpp"

namespace popwave {

Field1D::Field1D(Grid1D grid_, std::vector<std::vector<double>> components_, double time_)
    : grid(grid_), components(std::move(components_)), time(time_) {
  require_finite(time, "field time");
  if (components.empty()) fail(ErrorKind::domain, "field needs at least one component");
  for (const auto& c : components) {
    if (c.size() != grid.size()) fail(ErrorKind::domain, "field component length != grid size");
    for (double v : c) require_finite(v, "field value");
  }
}

void PdeModel::validate() const {
  const auto n = static_cast<Eigen::Index>(populations());
  if (diffusion.rows() != n || diffusion.cols() != n) {
    fail(ErrorKind::configuration, "diffusion matrix must be N x N");
  }
  if (!diffusion.allFinite()) fail(ErrorKind::domain, "diffusion matrix must be finite");
  if (transport) {
    if (transport->rows() != n || transport->cols() != n) {
      fail(ErrorKind::configuration, "transport matrix must be N x N");
    }
    if (!transport->allFinite()) fail(ErrorKind::domain, "transport matrix must be finite");
  }
}

namespace {

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.size() == 0 || m.isZero(0.0)) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

double max_stable_dt(const PdeModel& model, const Grid1D& grid) {
  model.validate();
  const double dx = grid.dx();
  double bound = std::numeric_limits<double>::infinity();
  if (const double d = spectral_radius(model.diffusion); d > 0.0) {
    bound = std::min(bound, 0.4 * dx * dx / d);
  }
  if (model.transport) {
    if (const double t = spectral_radius(*model.transport); t > 0.0) {
      bound = std::min(bound, 2.0 * dx / t);
    }
  }
  return bound;
}

namespace {

/// Work arrays and precomputed operators for one integration.
class Stepper {
 public:
  Stepper(const PdeModel& model, const Grid1D& grid, const BoundaryCondition& bc,
          const std::vector<std::vector<double>>& initial)
      : model_(model), n_(grid.size()), m_(model.populations()), dx_(grid.dx()), bc_(bc) {
    fixed_ = bc.kind == BoundaryCondition::Kind::fixed_value;
    if (fixed_) {
      left_ = bc.left;
      right_ = bc.right;
      if (left_.empty()) {
        for (const auto& c : initial) left_.push_back(c.front());
      }
      if (right_.empty()) {
        for (const auto& c : initial) right_.push_back(c.back());
      }
      if (left_.size() != m_ || right_.size() != m_) {
        fail(ErrorKind::configuration, "fixed-value boundary needs one value per component");
      }
      for (double v : left_) require_finite(v, "boundary value");
      for (double v : right_) require_finite(v, "boundary value");
    }
    D_ = model.diffusion;
    has_T_ = model.transport && !model.transport->isZero(0.0);
    if (has_T_) T_ = *model.transport;
    has_D_ = !D_.isZero(0.0);
    rho_.resize(m_);
    out_.resize(m_);
  }

  /// Imposes fixed boundary values in place.
  void apply_bc(std::vector<std::vector<double>>& u) const {
    if (!fixed_) return;
    for (std::size_t k = 0; k < m_; ++k) {
      u[k].front() = left_[k];
      u[k].back() = right_[k];
    }
  }

  void rhs(const std::vector<std::vector<double>>& u, std::vector<std::vector<double>>& du) {
    const double inv_dx2 = 1.0 / (dx_ * dx_);
    const double inv_2dx = 0.5 / dx_;
    for (std::size_t i = 0; i < n_; ++i) {
      const bool edge = i == 0 || i + 1 == n_;
      if (edge && fixed_) {
        for (std::size_t k = 0; k < m_; ++k) du[k][i] = 0.0;
        continue;
      }
      for (std::size_t k = 0; k < m_; ++k) rho_[k] = u[k][i];
      model_.reaction.evaluate(rho_, out_);
      for (std::size_t k = 0; k < m_; ++k) {
        double acc = out_[k];
        for (std::size_t l = 0; l < m_; ++l) {
          const auto& w = u[l];
          // Zero-gradient ghost nodes mirror the first interior neighbour.
          const double left = i == 0 ? w[1] : w[i - 1];
          const double right = i + 1 == n_ ? w[n_ - 2] : w[i + 1];
          const auto kk = static_cast<Eigen::Index>(k), ll = static_cast<Eigen::Index>(l);
          if (has_D_) acc += D_(kk, ll) * (left - 2.0 * w[i] + right) * inv_dx2;
          if (has_T_) acc += T_(kk, ll) * (right - left) * inv_2dx;
        }
        du[k][i] = acc;
      }
    }
  }

 private:
  const PdeModel& model_;
  std::size_t n_, m_;
  double dx_;
  BoundaryCondition bc_;
  bool fixed_ = false, has_D_ = false, has_T_ = false;
  std::vector<double> left_, right_;
  Eigen::MatrixXd D_, T_;
  std::vector<double> rho_, out_;
};

void check_field_matches(const PdeModel& model, const Field1D& field) {
  model.validate();
  if (field.populations() != model.populations()) {
    fail(ErrorKind::configuration, "field has " + std::to_string(field.populations()) +
                                       " components but the model has " +
                                       std::to_string(model.populations()));
  }
}

using State = std::vector<std::vector<double>>;

void axpy(State& out, const State& base, double h, const State& k) {
  for (std::size_t c = 0; c < out.size(); ++c) {
    for (std::size_t i = 0; i < out[c].size(); ++i) out[c][i] = base[c][i] + h * k[c][i];
  }
}

}  // namespace

std::vector<std::vector<double>> semi_discrete_rhs(const PdeModel& model, const Field1D& field,
                                                   const BoundaryCondition& bc) {
  check_field_matches(model, field);
  Stepper stepper(model, field.grid, bc, field.components);
  State du = field.components;
  stepper.rhs(field.components, du);
  return du;
}

Field1D integrate(const PdeModel& model, Field1D field, double t_end, double dt,
                  const BoundaryCondition& bc) {
  check_field_matches(model, field);
  require_finite(t_end, "t_end");
  require_finite(dt, "dt");
  if (!(dt > 0.0)) fail(ErrorKind::configuration, "dt must be positive");
  if (t_end < field.time) fail(ErrorKind::configuration, "t_end precedes the field time");
  const double bound = max_stable_dt(model, field.grid);
  if (dt > bound) {
    fail(ErrorKind::configuration, "dt = " + std::to_string(dt) +
                                       " violates the explicit stability bound " +
                                       std::to_string(bound));
  }

  const double span = t_end - field.time;
  if (span == 0.0) return field;
  const auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-12));
  const double h = span / static_cast<double>(steps);
  const double t0 = field.time;

  Stepper stepper(model, field.grid, bc, field.components);
  State& u = field.components;
  stepper.apply_bc(u);
  State k1 = u, k2 = u, k3 = u, k4 = u, tmp = u;

  for (std::size_t s = 0; s < steps; ++s) {
    stepper.rhs(u, k1);
    axpy(tmp, u, 0.5 * h, k1);
    stepper.rhs(tmp, k2);
    axpy(tmp, u, 0.5 * h, k2);
    stepper.rhs(tmp, k3);
    axpy(tmp, u, h, k3);
    stepper.rhs(tmp, k4);
    bool finite = true;
    for (std::size_t c = 0; c < u.size(); ++c) {
      for (std::size_t i = 0; i < u[c].size(); ++i) {
        u[c][i] += h / 6.0 * (k1[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]);
        finite = finite && std::isfinite(u[c][i]);
      }
    }
    const double t = t0 + static_cast<double>(s + 1) * h;
    if (!finite) throw BlowUpError("non-finite state at t = " + std::to_string(t), t);
  }
  field.time = t_end;
  return field;
}

double front_position(const Field1D& field, std::size_t component, double level) {
  require_finite(level, "front level");
  if (component >= field.populations()) fail(ErrorKind::domain, "front component out of range");
  const auto& u = field.components[component];
  const auto& g = field.grid;

  // Sign changes between consecutive nodes that are off the level; a run of nodes lying
  // exactly on the level is crossed at its midpoint.
  std::size_t crossings = 0;
  double where = 0.0;
  std::size_t prev = u.size();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - level;
    if (d == 0.0) continue;
    if (prev < u.size() && (u[prev] - level) * d < 0.0) {
      ++crossings;
      if (i == prev + 1) {
        const double lo = u[prev] - level;
        where = g.x(prev) + (g.x(i) - g.x(prev)) * lo / (lo - d);
      } else {
        where = 0.5 * (g.x(prev + 1) + g.x(i - 1));
      }
    }
    prev = i;
  }
  if (crossings != 1) {
    fail(ErrorKind::front_not_found, "component " + std::to_string(component) + " crosses level " +
                                         std::to_string(level) + " " + std::to_string(crossings) +
                                         " times");
  }
  return where;
}

std::vector<double> integrate_ode(const MultiPolynomial& reaction, std::vector<double> rho,
                                  double t_span, double dt) {
  if (rho.size() != reaction.populations()) fail(ErrorKind::configuration, "ODE state size mismatch");
  if (!(dt > 0.0)) fail(ErrorKind::configuration, "dt must be positive");
  if (!(t_span >= 0.0)) fail(ErrorKind::configuration, "t_span must be >= 0");
  if (t_span == 0.0) return rho;
  const auto steps = static_cast<std::size_t>(std::ceil(t_span / dt - 1e-12));
  const double h = t_span / static_cast<double>(steps);
  const std::size_t m = rho.size();
  std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);
  for (std::size_t s = 0; s < steps; ++s) {
    reaction.evaluate(rho, k1);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = rho[i] + 0.5 * h * k1[i];
    reaction.evaluate(tmp, k2);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = rho[i] + 0.5 * h * k2[i];
    reaction.evaluate(tmp, k3);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = rho[i] + h * k3[i];
    reaction.evaluate(tmp, k4);
    for (std::size_t i = 0; i < m; ++i) {
      rho[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(rho[i])) {
        const double t = static_cast<double>(s + 1) * h;
        throw BlowUpError("non-finite ODE state at t = " + std::to_string(t), t);
      }
    }
  }
  return rho;
}

double homogeneous_check(const PdeModel& model, const std::vector<double>& rho0, double t_end,
                         double dt) {
  model.validate();
  if (rho0.size() != model.populations()) fail(ErrorKind::configuration, "rho0 size mismatch");
  if (!(dt > 0.0)) fail(ErrorKind::configuration, "dt must be positive");

  // A coarse grid whose spacing keeps dt admissible; spatial derivatives of a constant vanish.
  double dx = 1.0;
  const double probe = max_stable_dt(model, Grid1D(0.0, 15.0, 16));
  if (dt > probe) dx *= std::sqrt(dt / probe) * 1.01 + dt / probe;
  const Grid1D grid(0.0, 15.0 * dx, 16);

  std::vector<std::vector<double>> comps;
  for (double r : rho0) comps.emplace_back(grid.size(), r);
  const Field1D pde = integrate(model, Field1D(grid, std::move(comps)), t_end, dt, {});
  const std::vector<double> ode = integrate_ode(model.reaction, rho0, t_end, dt);

  double worst = 0.0;
  for (std::size_t k = 0; k < ode.size(); ++k) {
    for (double v : pde.components[k]) worst = std::max(worst, std::abs(v - ode[k]));
  }
  return worst;
}

}  // namespace popwave
