#include "popwave/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "popwave/error.hpp"
#include "popwave/rng.hpp"

namespace popwave {

DiffusionModel1D::DiffusionModel1D(Polynomial drift_, double b_) : drift(std::move(drift_)), b(b_) {
  require_finite(b, "noise intensity b");
  if (!(b > 0.0)) fail(ErrorKind::domain, "noise intensity b must be positive");
}

bool DiffusionModel1D::confining() const noexcept {
  const std::size_t L = drift.degree();
  return L % 2 == 1 && drift.leading() < 0.0;
}

void DiffusionModel1D::require_confining() const {
  if (!confining()) {
    fail(ErrorKind::non_normalizable,
         "drift must have odd degree and a negative leading coefficient");
  }
}

namespace {

Polynomial psi_polynomial(const DiffusionModel1D& model) {
  return model.drift.antiderivative().scaled(2.0 / model.b);
}

std::vector<double> sample(const Polynomial& f, const Grid1D& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(grid.x(i));
  return out;
}

/// Linear interpolation of node values at x (0 outside the grid).
double interpolate(const Grid1D& grid, const std::vector<double>& v, double x) {
  if (x < grid.x_min() || x > grid.x_max()) return 0.0;
  const double s = (x - grid.x_min()) / grid.dx();
  const auto i = std::min(static_cast<std::size_t>(s), grid.size() - 2);
  const double t = s - static_cast<double>(i);
  return (1.0 - t) * v[i] + t * v[i + 1];
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

StationaryPdf finish(const Grid1D& grid, std::vector<double> values, double C1_unscaled,
                     double extra_scale = 1.0) {
  const double mass = trapezoid(grid, values);
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    fail(ErrorKind::non_normalizable, "stationary density has no positive finite mass on the grid");
  }
  const double k = extra_scale / mass;
  for (double& v : values) v *= k;
  const double peak = max_of(values);
  StationaryPdf out{DensityOnGrid(grid, std::move(values)), C1_unscaled * k, 0.0, 0.0};
  out.edge_ratio = std::max(out.density.values.front(), out.density.values.back()) / peak;
  out.p_at_zero = interpolate(grid, out.density.values, 0.0);
  return out;
}

}  // namespace

double potential(const DiffusionModel1D& model, double x) {
  return -model.drift.antiderivative()(x);
}

double log_weight(const DiffusionModel1D& model, double x) { return psi_polynomial(model)(x); }

DensityOnGrid::DensityOnGrid(Grid1D grid_, std::vector<double> values_)
    : grid(grid_), values(std::move(values_)) {
  if (values.size() != grid.size()) fail(ErrorKind::domain, "density length != grid size");
  for (double v : values) {
    require_finite(v, "density value");
    if (v < 0.0) fail(ErrorKind::domain, "density values must be non-negative");
  }
  normalization = trapezoid(grid, values);
}

// ---------------------------------------------------------------------------
// Stationary densities

StationaryPdf stationary_pdf_full_line(const DiffusionModel1D& model, const Grid1D& grid) {
  model.require_confining();
  std::vector<double> psi = sample(psi_polynomial(model), grid);
  const double top = max_of(psi);
  for (double& v : psi) v = std::exp(v - top);
  return finish(grid, std::move(psi), 0.0);
}

std::vector<double> anchored_integral(const DiffusionModel1D& model, const Grid1D& grid) {
  const Polynomial psi = psi_polynomial(model);
  static const GaussLegendre gl(16);

  // q(y) = exp(Psi(y) - Psi(x)) q(x) + integral_x^y exp(Psi(y) - Psi(s)) ds.
  const auto advance = [&](double x, double qx, double y) {
    const double py = psi(y);
    const double mid = 0.5 * (x + y), half = 0.5 * (y - x);
    double acc = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const double s = mid + half * gl.nodes[k];
      acc += gl.weights[k] * std::exp(py - psi(s));
    }
    return std::exp(py - psi(x)) * qx + half * acc;
  };

  const std::size_t n = grid.size();
  std::vector<double> q(n);
  const double dx = grid.dx();

  // Anchor node: the one nearest to 0, reached from 0 in steps of at most dx.
  std::size_t j = 0;
  if (grid.x_max() <= 0.0) {
    j = n - 1;
  } else if (grid.x_min() < 0.0) {
    j = static_cast<std::size_t>(std::llround(-grid.x_min() / dx));
    j = std::min(j, n - 1);
  }
  {
    const double target = grid.x(j);
    const auto pieces = static_cast<std::size_t>(std::ceil(std::abs(target) / dx - 1e-9));
    double x = 0.0, qx = 0.0;
    for (std::size_t p = 1; p <= pieces; ++p) {
      const double y = p == pieces ? target : target * static_cast<double>(p) / pieces;
      qx = advance(x, qx, y);
      x = y;
    }
    q[j] = qx;
  }
  for (std::size_t i = j + 1; i < n; ++i) q[i] = advance(grid.x(i - 1), q[i - 1], grid.x(i));
  for (std::size_t i = j; i-- > 0;) q[i] = advance(grid.x(i + 1), q[i + 1], grid.x(i));
  return q;
}

StationaryPdf stationary_pdf_absorbing_origin(const DiffusionModel1D& model, const Grid1D& grid) {
  if (grid.x_min() != 0.0) fail(ErrorKind::domain, "absorbing-origin density needs a grid starting at 0");
  if (!model.drift.is_zero() && model.drift.leading() > 0.0) {
    fail(ErrorKind::non_normalizable, "drift with positive leading coefficient is not confining on [0, inf)");
  }
  std::vector<double> q = anchored_integral(model, grid);
  // p = K q with (b/2) p' - X p = (b/2) K, i.e. C1 = -(b/2) K before normalization K = 1.
  return finish(grid, std::move(q), -0.5 * model.b);
}

StationaryPdf stationary_pdf_pinned(const DiffusionModel1D& model, double A, const Grid1D& grid) {
  require_finite(A, "pinned value A");
  if (A < 0.0) fail(ErrorKind::domain, "pinned value A must be >= 0");
  if (!model.drift.is_zero() && model.drift.leading() > 0.0) {
    fail(ErrorKind::non_normalizable, "drift with positive leading coefficient is not confining");
  }

  const std::vector<double> psi = sample(psi_polynomial(model), grid);
  std::vector<double> w(psi.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(psi[i]);
  const std::vector<double> q = anchored_integral(model, grid);
  const double M0 = trapezoid(grid, w);
  const double M1 = trapezoid(grid, q);
  if (!std::isfinite(M0) || !std::isfinite(M1)) {
    fail(ErrorKind::non_normalizable, "pinned density overflows on the grid");
  }

  // Normalization: A M0 - (C - A) M1 = 1.
  const double excess = A * M0 - 1.0;
  double CmA = 0.0;
  double q_scale = 0.0;
  for (double v : q) q_scale = std::max(q_scale, std::abs(v));
  if (std::abs(M1) > 1e-14 * q_scale * (grid.x_max() - grid.x_min())) {
    CmA = excess / M1;
  } else if (std::abs(excess) > 1e-12) {
    fail(ErrorKind::non_normalizable, "no member with p(0) = A is normalizable on the grid");
  }

  std::vector<double> p(w.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = A * w[i] - CmA * q[i];
    peak = std::max(peak, p[i]);
  }
  for (double& v : p) {
    if (v < 0.0) {
      if (v < -1e-12 * peak) {
        fail(ErrorKind::non_normalizable,
             "the normalized member with p(0) = A is negative on the grid");
      }
      v = 0.0;
    }
  }
  const double mass = trapezoid(grid, p);
  return finish(grid, std::move(p), 0.5 * model.b * CmA, mass);
}

std::vector<Extremum> pdf_extrema(const DensityOnGrid& p) {
  const auto& v = p.values;
  const auto& g = p.grid;
  std::vector<Extremum> out;
  // prev: index i of the last nonzero difference v[i+1] - v[i].
  std::size_t prev = v.size();
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double d = v[i + 1] - v[i];
    if (d == 0.0) continue;
    if (prev < v.size()) {
      const double dp = v[prev + 1] - v[prev];
      if ((dp > 0.0) != (d > 0.0)) {
        const auto kind = dp > 0.0 ? Extremum::Kind::maximum : Extremum::Kind::minimum;
        double x;
        if (i == prev + 1) {
          const double l = v[i - 1], c = v[i], r = v[i + 1];
          const double curv = l - 2.0 * c + r;
          x = g.x(i) + (curv != 0.0 ? 0.5 * g.dx() * (l - r) / curv : 0.0);
        } else {
          x = 0.5 * (g.x(prev + 1) + g.x(i));
        }
        out.push_back({x, kind});
      }
    }
    prev = i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exit time

namespace {

void require_exit_model(const DiffusionModel1D& model) {
  if (!model.confining()) {
    fail(ErrorKind::divergence,
         "exit-time inner integral diverges: drift needs odd degree and negative leading coefficient");
  }
}

}  // namespace

std::vector<double> exit_time_curve(const DiffusionModel1D& model, double q,
                                    const std::vector<double>& rho,
                                    const ExitTimeOptions& options) {
  require_finite(q, "exit threshold q");
  require_exit_model(model);
  const Polynomial W = psi_polynomial(model);

  const auto g = [&](double xi) {
    const double w_xi = W(xi);
    const QuadratureResult inner =
        integrate_log_tail([&](double eta) { return W(eta) - w_xi; }, xi, options.inner);
    return 2.0 / model.b * inner.value;
  };

  std::vector<double> out;
  out.reserve(rho.size());
  double last = q, acc = 0.0;
  for (double r : rho) {
    require_finite(r, "initial density");
    if (r < last) fail(ErrorKind::domain, "exit-time points must be ascending and >= q");
    if (r > last) acc += adaptive_simpson(g, last, r, options.outer).value;
    out.push_back(acc);
    last = r;
  }
  return out;
}

double exit_time(const DiffusionModel1D& model, double q, double rho0,
                 const ExitTimeOptions& options) {
  require_finite(q, "exit threshold q");
  require_finite(rho0, "initial density");
  if (q > rho0) fail(ErrorKind::domain, "exit time needs q <= rho0");
  if (q == rho0) return 0.0;
  return exit_time_curve(model, q, {rho0}, options).front();
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

/// Runs body(first, last) over contiguous blocks of [0, n) on `threads` threads.
template <class Body>
void parallel_blocks(std::size_t n, unsigned threads, Body body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t first = n * t / threads, last = n * (t + 1) / threads;
    pool.emplace_back([&, t, first, last] {
      try {
        body(first, last);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t step_count(double span, double dt) {
  const double s = std::ceil(span / dt - 1e-9);
  if (s > 4.0e9) fail(ErrorKind::configuration, "too many time steps (span / dt > 4e9)");
  return static_cast<std::size_t>(std::max(s, 1.0));
}

}  // namespace

LangevinEnsemble langevin_ensemble(const DiffusionModel1D& model, const LangevinOptions& o) {
  require_finite(o.x0, "x0");
  require_finite(o.dt, "dt");
  require_finite(o.t_end, "t_end");
  if (!(o.dt > 0.0)) fail(ErrorKind::configuration, "dt must be positive");
  if (!(o.t_end >= 0.0)) fail(ErrorKind::configuration, "t_end must be >= 0");
  if (o.n_paths == 0) fail(ErrorKind::configuration, "n_paths must be >= 1");

  const std::size_t steps = o.t_end == 0.0 ? 0 : step_count(o.t_end, o.dt);
  const double h = steps == 0 ? 0.0 : o.t_end / static_cast<double>(steps);
  const double noise = std::sqrt(model.b * h);
  const bool absorbing = o.absorb_at.has_value();
  const double q = absorbing ? *o.absorb_at : 0.0;
  const Polynomial& X = model.drift;

  LangevinEnsemble out;
  out.final_x.assign(o.n_paths, o.x0);
  out.absorption_time.assign(o.n_paths, std::numeric_limits<double>::quiet_NaN());
  out.blown_up.assign(o.n_paths, 0);

  parallel_blocks(o.n_paths, o.threads, [&](std::size_t first, std::size_t last) {
    for (std::size_t path = first; path < last; ++path) {
      const NormalStream rng(o.seed, path);
      double x = o.x0;
      if (absorbing && x <= q) {
        out.absorption_time[path] = 0.0;
        continue;
      }
      std::array<double, 2> z{};
      for (std::size_t k = 0; k < steps; ++k) {
        if (k % 2 == 0) z = rng.pair(static_cast<std::uint32_t>(k / 2));
        const double nx = x + X(x) * h + noise * z[k % 2];
        if (!std::isfinite(nx) || std::abs(nx) > o.blow_up) {
          out.blown_up[path] = 1;
          break;
        }
        x = nx;
        if (absorbing && x <= q) {
          out.absorption_time[path] = static_cast<double>(k + 1) * h;
          break;
        }
      }
      out.final_x[path] = x;
    }
  });

  for (std::size_t i = 0; i < o.n_paths; ++i) {
    out.blown += out.blown_up[i];
    out.absorbed += std::isnan(out.absorption_time[i]) ? 0 : 1;
  }
  return out;
}

McExitResult mc_exit_time(const DiffusionModel1D& model, double x0, double q,
                          const McExitOptions& o) {
  require_finite(x0, "x0");
  require_finite(q, "q");
  if (q > x0) fail(ErrorKind::domain, "mc_exit_time needs q <= x0");
  if (!(o.dt > 0.0)) fail(ErrorKind::configuration, "dt must be positive");
  if (!(o.horizon > 0.0)) fail(ErrorKind::configuration, "horizon must be positive");
  if (o.n_paths == 0) fail(ErrorKind::configuration, "n_paths must be >= 1");
  if (q == x0) return {0.0, 0.0, o.n_paths, 0.0};

  const std::size_t max_steps = step_count(o.horizon, o.dt);
  const double h = o.dt;
  const double noise = std::sqrt(model.b * h);
  const double bridge_scale = -2.0 / (model.b * h);
  const Polynomial& X = model.drift;
  std::vector<double> times(o.n_paths, std::numeric_limits<double>::quiet_NaN());

  parallel_blocks(o.n_paths, o.threads, [&](std::size_t first, std::size_t last) {
    for (std::size_t path = first; path < last; ++path) {
      const NormalStream normals(o.seed, path, 0);
      const NormalStream uniforms(o.seed, path, 1);
      double x = x0;
      std::array<double, 2> z{}, u{};
      for (std::size_t k = 0; k < max_steps; ++k) {
        if (k % 2 == 0) {
          z = normals.pair(static_cast<std::uint32_t>(k / 2));
          if (o.bridge) u = uniforms.uniforms(static_cast<std::uint32_t>(k / 2));
        }
        const double nx = x + X(x) * h + noise * z[k % 2];
        if (!std::isfinite(nx)) break;
        // Crossing between grid times: probability exp(-2 (x - q)(nx - q) / (b h)).
        const bool crossed =
            nx <= q || (o.bridge && u[k % 2] < std::exp(bridge_scale * (x - q) * (nx - q)));
        if (crossed) {
          times[path] = static_cast<double>(k + 1) * h;
          break;
        }
        x = nx;
      }
    }
  });

  std::vector<double> hit;
  hit.reserve(times.size());
  for (double t : times) {
    if (!std::isnan(t)) hit.push_back(t);
  }
  const double alive = static_cast<double>(times.size() - hit.size()) / static_cast<double>(times.size());
  if (alive > 0.01) {
    fail(ErrorKind::horizon, std::to_string(100.0 * alive) + "% of paths not absorbed by the horizon");
  }
  McExitResult r;
  r.n = hit.size();
  r.unabsorbed_fraction = alive;
  if (hit.empty()) return r;
  r.mean = pairwise_sum(hit) / static_cast<double>(hit.size());
  std::vector<double> dev(hit.size());
  for (std::size_t i = 0; i < hit.size(); ++i) dev[i] = (hit[i] - r.mean) * (hit[i] - r.mean);
  if (hit.size() > 1) {
    r.std_error = std::sqrt(pairwise_sum(dev) / static_cast<double>(hit.size() - 1) /
                            static_cast<double>(hit.size()));
  }
  return r;
}

Histogram histogram_density(const std::vector<double>& samples, double lo, double hi,
                            std::size_t bins) {
  if (!(lo < hi)) fail(ErrorKind::domain, "histogram needs lo < hi");
  if (bins == 0) fail(ErrorKind::domain, "histogram needs at least one bin");
  if (samples.empty()) fail(ErrorKind::domain, "histogram of an empty sample");
  Histogram h{lo, hi, std::vector<double>(bins, 0.0)};
  std::size_t outside = 0;
  const double w = h.width();
  for (double s : samples) {
    if (!(s >= lo && s <= hi)) {
      ++outside;
      continue;
    }
    const auto j = std::min(static_cast<std::size_t>((s - lo) / w), bins - 1);
    h.density[j] += 1.0;
  }
  const double n = static_cast<double>(samples.size());
  for (double& d : h.density) d /= n * w;
  h.outside = static_cast<double>(outside) / n;
  return h;
}

double l1_distance(const Histogram& h, const DensityOnGrid& p) {
  const auto& g = p.grid;
  const auto& v = p.values;
  // Cumulative integral of the piecewise-linear interpolant.
  std::vector<double> cum(v.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) cum[i] = cum[i - 1] + 0.5 * g.dx() * (v[i - 1] + v[i]);
  const auto P = [&](double x) {
    if (x <= g.x_min()) return 0.0;
    if (x >= g.x_max()) return cum.back();
    const double s = (x - g.x_min()) / g.dx();
    const auto i = std::min(static_cast<std::size_t>(s), v.size() - 2);
    const double t = (s - static_cast<double>(i)) * g.dx();
    const double slope = (v[i + 1] - v[i]) / g.dx();
    return cum[i] + t * (v[i] + 0.5 * slope * t);
  };
  double total = 0.0, inside = 0.0;
  const double w = h.width();
  for (std::size_t j = 0; j < h.density.size(); ++j) {
    const double a = h.lo + static_cast<double>(j) * w;
    const double mass = P(a + w) - P(a);
    inside += mass;
    total += std::abs(h.density[j] * w - mass);
  }
  return total + std::abs(h.outside - (cum.back() - inside));
}

// ---------------------------------------------------------------------------
// Fokker-Planck

namespace {

double bernoulli(double z) {
  if (std::abs(z) < 1e-8) return 1.0 - 0.5 * z;
  return z / std::expm1(z);
}

void require_same_grid(const DensityOnGrid& p, const DensityOnGrid& q) {
  if (!(p.grid == q.grid)) fail(ErrorKind::domain, "densities live on different grids");
}

}  // namespace

FpTrajectory fp_evolve(const DiffusionModel1D& model, const DensityOnGrid& p_init, double t_end,
                       double dt, const FpOptions& options) {
  require_finite(t_end, "t_end");
  require_finite(dt, "dt");
  if (!(dt > 0.0)) fail(ErrorKind::configuration, "dt must be positive");
  if (!(t_end >= 0.0)) fail(ErrorKind::configuration, "t_end must be >= 0");
  if (!(options.sample_every > 0.0)) fail(ErrorKind::configuration, "sample_every must be positive");

  const Grid1D& grid = p_init.grid;
  const std::size_t n = grid.size();
  const double dx = grid.dx();
  const double bound = 0.4 * dx * dx / model.b;
  if (dt > bound) {
    fail(ErrorKind::configuration, "dt = " + std::to_string(dt) + " exceeds 0.4 dx^2 / b = " +
                                       std::to_string(bound));
  }

  const std::size_t steps = t_end == 0.0 ? 0 : step_count(t_end, dt);
  const double h = steps == 0 ? 0.0 : t_end / static_cast<double>(steps);

  // Face i joins nodes i and i + 1: J_i = c (lo_i p_i - hi_i p_{i+1}).
  const std::vector<double> psi = sample(psi_polynomial(model), grid);
  const double c = 0.5 * model.b / dx;
  std::vector<double> lo(n - 1), hi(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = psi[i + 1] - psi[i];
    lo[i] = c * bernoulli(-d);
    hi[i] = c * bernoulli(d);
  }
  // Update in the non-negative form p_i' = keep_i p_i + gain_from_left_i p_{i-1} + gain_from_right_i p_{i+1}.
  std::vector<double> keep(n), from_left(n, 0.0), from_right(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double vol = (i == 0 || i + 1 == n) ? 0.5 * dx : dx;
    const double r = h / vol;
    double out_rate = 0.0;
    if (i + 1 < n) {
      out_rate += lo[i];
      from_right[i] = r * hi[i];
    }
    if (i > 0) {
      out_rate += hi[i - 1];
      from_left[i] = r * lo[i - 1];
    }
    keep[i] = 1.0 - r * out_rate;
    if (keep[i] < 0.0) {
      fail(ErrorKind::configuration,
           "dt too large for the drift on this grid (cell Peclet number too high)");
    }
  }

  FpTrajectory traj;
  std::vector<double> p = p_init.values, next(n);
  const double m0 = trapezoid(grid, p);
  const auto sample_steps = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(options.sample_every / std::max(h, 1e-300))));

  const auto record = [&](std::size_t k) {
    const double t = static_cast<double>(k) * h;
    const double drift = std::abs(trapezoid(grid, p) - m0);
    traj.max_mass_drift = std::max(traj.max_mass_drift, drift);
    if (drift > options.mass_tolerance * std::max(t, 1.0)) {
      fail(ErrorKind::conservation, "probability mass drifted by " + std::to_string(drift));
    }
    traj.times.push_back(t);
    traj.densities.emplace_back(grid, p);
  };

  record(0);
  for (std::size_t k = 1; k <= steps; ++k) {
    next[0] = keep[0] * p[0] + from_right[0] * p[1];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      next[i] = keep[i] * p[i] + from_left[i] * p[i - 1] + from_right[i] * p[i + 1];
    }
    next[n - 1] = keep[n - 1] * p[n - 1] + from_left[n - 1] * p[n - 2];
    p.swap(next);
    if (k % sample_steps == 0 || k == steps) record(k);
  }
  if (!traj.times.empty()) traj.times.back() = steps == 0 ? 0.0 : t_end;
  return traj;
}

double lyapunov_H(const DensityOnGrid& p, const DensityOnGrid& p0) {
  require_same_grid(p, p0);
  std::vector<double> integrand(p.values.size());
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    const double a = p.values[i], b = p0.values[i];
    if (a == 0.0) {
      integrand[i] = 0.0;
    } else if (b == 0.0) {
      fail(ErrorKind::support, "p > 0 where p0 = 0 at x = " + std::to_string(p.grid.x(i)));
    } else {
      integrand[i] = a * std::log(a / b);
    }
  }
  return trapezoid(p.grid, integrand);
}

double l1_distance(const DensityOnGrid& p, const DensityOnGrid& q) {
  require_same_grid(p, q);
  std::vector<double> d(p.values.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::abs(p.values[i] - q.values[i]);
  return trapezoid(p.grid, d);
}

}  // namespace popwave
