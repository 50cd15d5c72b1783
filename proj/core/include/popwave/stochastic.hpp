#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "popwave/grid.hpp"
#include "popwave/polynomial.hpp"
#include "popwave/quadrature.hpp"

namespace popwave {

/// dx = X(x) dt + sqrt(b) dW with polynomial drift X.
struct DiffusionModel1D {
  Polynomial drift;
  double b;

  /// Throws ErrorKind::domain unless b > 0 and finite.
  DiffusionModel1D(Polynomial drift, double b);

  /// True when the drift degree is odd with a negative leading coefficient, i.e. the
  /// stationary density is integrable over the whole line.
  bool confining() const noexcept;
  /// Throws ErrorKind::non_normalizable unless confining().
  void require_confining() const;
};

/// V(x) = -integral_0^x X, so V(0) = 0.
double potential(const DiffusionModel1D& model, double x);

/// Psi(x) = (2/b) integral_0^x X = -2 V(x) / b; the stationary density is proportional to exp(Psi).
double log_weight(const DiffusionModel1D& model, double x);

/// Non-negative density sampled on grid nodes.
struct DensityOnGrid {
  Grid1D grid;
  std::vector<double> values;
  /// Trapezoid integral of values.
  double normalization = 0.0;

  DensityOnGrid(Grid1D grid, std::vector<double> values);
};

struct StationaryPdf {
  DensityOnGrid density;
  /// Constant C1 of the once-integrated equation (b/2) p' - X p + C1 = 0.
  double C1 = 0.0;
  /// max(p at either end) / max p. The grid is wide enough when this is below 1e-16.
  double edge_ratio = 0.0;
  /// Value of the normalized density at rho = 0 (interpolated when 0 is not a node).
  double p_at_zero = 0.0;

  bool truncated() const noexcept { return edge_ratio >= 1e-16; }
};

/// Zero-flux density proportional to exp(Psi), normalized on the grid.
/// Throws ErrorKind::non_normalizable for a non-confining drift; a grid that cuts off
/// more than 1e-16 of the peak is reported through edge_ratio rather than rejected.
StationaryPdf stationary_pdf_full_line(const DiffusionModel1D& model, const Grid1D& grid);

/// p(rho) = K exp(Psi(rho)) integral_0^rho exp(-Psi(s)) ds on a grid starting at 0, so
/// p(0) = 0 and C1 = -b K / 2. Throws ErrorKind::domain unless grid.x_min() == 0 and
/// ErrorKind::non_normalizable unless the leading drift coefficient is negative.
StationaryPdf stationary_pdf_absorbing_origin(const DiffusionModel1D& model, const Grid1D& grid);

/// Member of the family  exp(Psi) {A - (C - A) integral_0^rho exp(-Psi)}  with p(0) = A,
/// C fixed by normalization and C1 = b (C - A)/2. Throws ErrorKind::non_normalizable when
/// no member is normalizable and non-negative on the grid.
StationaryPdf stationary_pdf_pinned(const DiffusionModel1D& model, double A, const Grid1D& grid);

/// exp(Psi(x)) integral_0^x exp(-Psi(s)) ds at every node, by a cellwise recursion that
/// never forms exp(+-Psi) on its own.
std::vector<double> anchored_integral(const DiffusionModel1D& model, const Grid1D& grid);

struct Extremum {
  enum class Kind { maximum, minimum };
  double x;
  Kind kind;
};

/// Interior extrema from sign changes of the discrete derivative, refined by a parabola
/// through the three nodes around each change.
std::vector<Extremum> pdf_extrema(const DensityOnGrid& p);

struct ExitTimeOptions {
  SimpsonOptions outer{.rtol = 1e-8, .atol = 0.0, .max_depth = 50, .panels = 8};
  TailOptions inner{.simpson = {.rtol = 1e-10, .atol = 0.0, .max_depth = 50, .panels = 8}};
};

/// Expected first-passage time from rho0 down to q:
///   F = integral_q^rho0 dxi (2/b) integral_xi^inf exp(W(eta) - W(xi)) deta,  W = Psi.
/// Throws ErrorKind::domain for q > rho0 and ErrorKind::divergence for a non-confining drift.
double exit_time(const DiffusionModel1D& model, double q, double rho0,
                 const ExitTimeOptions& options = {});

/// F at each of the ascending points rho (all >= q), integrating segment by segment.
std::vector<double> exit_time_curve(const DiffusionModel1D& model, double q,
                                    const std::vector<double>& rho,
                                    const ExitTimeOptions& options = {});

struct LangevinOptions {
  double x0 = 0.0;
  double dt = 1e-3;
  double t_end = 1.0;
  std::size_t n_paths = 1;
  std::uint64_t seed = 0;
  /// Paths are stopped the first time x <= absorb_at.
  std::optional<double> absorb_at;
  double blow_up = 1e10;
  unsigned threads = 1;
};

struct LangevinEnsemble {
  /// Position at t_end, at absorption, or at the last finite step before blow-up.
  std::vector<double> final_x;
  /// Absorption time, NaN when the path was not absorbed.
  std::vector<double> absorption_time;
  std::vector<std::uint8_t> blown_up;
  std::size_t absorbed = 0;
  std::size_t blown = 0;
};

/// Euler-Maruyama ensemble. Normals come from a Philox stream keyed by (seed, path), so the
/// output is bit-identical for any thread count. Blown-up paths are flagged, not fatal.
LangevinEnsemble langevin_ensemble(const DiffusionModel1D& model, const LangevinOptions& options);

struct McExitOptions {
  double dt = 1e-3;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 0;
  double horizon = 1e4;
  /// Brownian-bridge test for crossings between grid times; removes the O(sqrt(dt)) bias
  /// of only checking x_k <= q.
  bool bridge = true;
  unsigned threads = 1;
};

struct McExitResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  double unabsorbed_fraction = 0.0;
};

/// Monte Carlo mean first-passage time to q. Throws ErrorKind::horizon when more than 1% of the
/// paths are still alive at the horizon; otherwise the survivors are excluded and counted.
McExitResult mc_exit_time(const DiffusionModel1D& model, double x0, double q,
                          const McExitOptions& options);

/// Histogram of samples on [lo, hi] normalized to a density (samples outside are counted in the
/// normalization but not binned).
struct Histogram {
  double lo, hi;
  std::vector<double> density;
  /// Fraction of samples outside [lo, hi].
  double outside = 0.0;
  double width() const noexcept { return (hi - lo) / static_cast<double>(density.size()); }
};
Histogram histogram_density(const std::vector<double>& samples, double lo, double hi,
                            std::size_t bins);

/// L1 distance between a histogram and a grid density, with the density integrated over
/// each bin by the trapezoid rule on its own nodes (linear interpolation at bin edges).
double l1_distance(const Histogram& h, const DensityOnGrid& p);

struct FpOptions {
  /// Snapshots are stored every `sample_every` time units (plus the final state).
  double sample_every = 1.0;
  /// Allowed |mass(t) - mass(0)| per unit time.
  double mass_tolerance = 1e-8;
};

struct FpTrajectory {
  std::vector<double> times;
  std::vector<DensityOnGrid> densities;
  double max_mass_drift = 0.0;
};

/// Explicit finite-volume Fokker-Planck evolution with zero-flux ends.
///
/// Control volumes are centred on nodes (half volumes at the ends), so the conserved mass is
/// the trapezoid integral. Face fluxes use exponential fitting,
///   J = (b/2)/dx [B(-d) p_i - B(d) p_{i+1}],  B(z) = z/(e^z - 1),  d = Psi_{i+1} - Psi_i,
/// which is the central flux for small cell Peclet numbers and leaves sampled exp(Psi)
/// exactly stationary. Throws ErrorKind::configuration when dt exceeds 0.4 dx^2 / b or the
/// positivity bound of the update, ErrorKind::conservation on mass drift.
FpTrajectory fp_evolve(const DiffusionModel1D& model, const DensityOnGrid& p_init, double t_end,
                       double dt, const FpOptions& options = {});

/// Trapezoid value of  integral p ln(p/p0) dx  with 0 ln 0 = 0.
/// Throws ErrorKind::support where p > 0 but p0 == 0, ErrorKind::domain on grid mismatch.
double lyapunov_H(const DensityOnGrid& p, const DensityOnGrid& p0);

/// Sum of |p - q| by the trapezoid rule (same grid).
double l1_distance(const DensityOnGrid& p, const DensityOnGrid& q);

}  // namespace popwave
