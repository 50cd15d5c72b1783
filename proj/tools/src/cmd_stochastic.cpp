#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "common.hpp"
#include "popwave/cli/cli.hpp"
#include "popwave/cli/output.hpp"
#include "popwave/error.hpp"
#include "popwave/quadrature.hpp"
#include "popwave/stochastic.hpp"

namespace popwave::cli {

namespace {

// Fig. 2(a) drift is the default model for every stochastic command.
Json model_defaults() {
  return Json{{"alpha", {0.0, 1.0, -0.4, 0.2, 0.0, -0.5}}, {"b", 2.0}};
}

Json with(Json base, const Json& extra) {
  for (const auto& [k, v] : extra.items()) base[k] = v;
  return base;
}

DiffusionModel1D model_from(const Resolved& cfg) {
  return DiffusionModel1D(Polynomial(cfg.list("alpha")), cfg.positive("b"));
}

Grid1D grid_from(const Resolved& cfg) {
  return Grid1D(cfg.number("x_min"), cfg.number("x_max"), count(cfg, "n", 16));
}

const char* kind_name(Extremum::Kind k) {
  return k == Extremum::Kind::maximum ? "maximum" : "minimum";
}

void write_density(const std::filesystem::path& path, const DensityOnGrid& p) {
  write_xy(path, p.grid.nodes(), p.values);
}

void pdf_artifacts(const Context& ctx, const Resolved& cfg, const DiffusionModel1D& model,
                   const StationaryPdf& pdf) {
  Json j = ctx.artifact(cfg);
  Json ex = Json::array();
  for (const auto& e : pdf_extrema(pdf.density)) ex.push_back({{"x", e.x}, {"kind", kind_name(e.kind)}});
  Json roots = Json::array();
  const Polynomial slope = model.drift.derivative();
  for (double r : real_roots(model.drift, pdf.density.grid.x_min(), pdf.density.grid.x_max())) {
    roots.push_back({{"x", r}, {"stable", slope(r) < 0.0}});
  }
  j["extrema"] = ex;
  j["drift_roots"] = roots;
  j["C1"] = pdf.C1;
  j["edge_ratio"] = pdf.edge_ratio;
  j["truncated"] = pdf.truncated();
  j["p_at_zero"] = pdf.p_at_zero;
  j["normalization"] = pdf.density.normalization;
  j["density"] = "density.csv";
  write_density(ctx.path("density.csv"), pdf.density);
  write_json(ctx.path("pdf.json"), j);
  ctx.announce(ctx.path("pdf.json"));
}

}  // namespace

void pdf_full(const Context& ctx) {
  const Resolved cfg = ctx.resolve(with(model_defaults(), {{"x_min", -3.0}, {"x_max", 3.0}, {"n", 6001}}));
  const auto model = model_from(cfg);
  pdf_artifacts(ctx, cfg, model, stationary_pdf_full_line(model, grid_from(cfg)));
}

void pdf_absorbing(const Context& ctx) {
  const Resolved cfg = ctx.resolve(with(model_defaults(), {{"x_min", 0.0}, {"x_max", 3.0}, {"n", 3001}}));
  const auto model = model_from(cfg);
  pdf_artifacts(ctx, cfg, model, stationary_pdf_absorbing_origin(model, grid_from(cfg)));
}

void pdf_pinned(const Context& ctx) {
  // A = null pins p(0) to the full-line value, which makes the result the full-line density.
  Resolved cfg = ctx.resolve(
      with(model_defaults(), {{"A", nullptr}, {"x_min", -3.0}, {"x_max", 3.0}, {"n", 6001}}));
  const auto model = model_from(cfg);
  const Grid1D grid = grid_from(cfg);
  if (cfg.is_null("A")) cfg.set("A", stationary_pdf_full_line(model, grid).p_at_zero);
  const double A = cfg.number("A");
  if (A < 0.0) fail(ErrorKind::configuration, "A must be >= 0");
  pdf_artifacts(ctx, cfg, model, stationary_pdf_pinned(model, A, grid));
}

// ---------------------------------------------------------------------------

namespace {

Json exit_defaults() {
  return Json{{"alpha", {0.01, 0.2, 0.1, -0.05}}, {"b", 2.0}, {"q", 0.0}};
}

}  // namespace

void exit_quad(const Context& ctx) {
  const Resolved cfg = ctx.resolve(with(exit_defaults(), {{"rho_max", 6.0}, {"points", 61}}));
  const auto model = model_from(cfg);
  const double q = cfg.number("q"), rho_max = cfg.number("rho_max");
  if (rho_max <= q) fail(ErrorKind::configuration, "rho_max must exceed q");
  const auto rho = linspace(q, rho_max, count(cfg, "points", 2));
  const auto F = exit_time_curve(model, q, rho);

  Json j = ctx.artifact(cfg);
  j["curve"] = "exit_time.csv";
  j["F_at_rho_max"] = F.back();
  write_xy(ctx.path("exit_time.csv"), rho, F);
  write_json(ctx.path("exit_quad.json"), j);
  ctx.announce(ctx.path("exit_quad.json"));
}

void exit_mc(const Context& ctx) {
  const Resolved cfg = ctx.resolve(with(exit_defaults(), {{"x0", {1.0, 2.0, 4.0}},
                                                          {"dt", 1e-3},
                                                          {"n_paths", 10000},
                                                          {"seed", 0},
                                                          {"horizon", 1e4},
                                                          {"bridge", true},
                                                          {"threads", 1}}));
  const auto model = model_from(cfg);
  McExitOptions opt;
  opt.dt = cfg.positive("dt");
  opt.n_paths = count(cfg, "n_paths", 2);
  opt.seed = cfg.unsigned_integer("seed");
  opt.horizon = cfg.positive("horizon");
  opt.bridge = cfg.boolean("bridge");
  opt.threads = static_cast<unsigned>(count(cfg, "threads", 1));
  const double q = cfg.number("q");

  Json j = ctx.artifact(cfg);
  Json results = Json::array();
  CsvWriter csv(ctx.path("exit_mc.csv"), {"x", "value", "stderr"});
  for (double x0 : cfg.list("x0")) {
    if (x0 < q) fail(ErrorKind::configuration, "every x0 must be >= q");
    const McExitResult r = mc_exit_time(model, x0, q, opt);
    csv.row({x0, r.mean, r.std_error});
    results.push_back({{"x0", x0},
                       {"mean", r.mean},
                       {"stderr", r.std_error},
                       {"n", r.n},
                       {"unabsorbed_fraction", r.unabsorbed_fraction},
                       {"seed", opt.seed},
                       {"dt", opt.dt}});
  }
  j["results"] = results;
  j["curve"] = "exit_mc.csv";
  write_json(ctx.path("exit_mc.json"), j);
  ctx.announce(ctx.path("exit_mc.json"));
}

// ---------------------------------------------------------------------------

void langevin_run(const Context& ctx) {
  const Resolved cfg = ctx.resolve(with(model_defaults(), {{"x0", 0.0},
                                                           {"dt", 1e-3},
                                                           {"t_end", 5.0},
                                                           {"n_paths", 100000},
                                                           {"seed", 0},
                                                           {"absorb_at", nullptr},
                                                           {"hist_min", -3.0},
                                                           {"hist_max", 3.0},
                                                           {"bins", 60},
                                                           {"threads", 1}}));
  const auto model = model_from(cfg);
  LangevinOptions opt;
  opt.x0 = cfg.number("x0");
  opt.dt = cfg.positive("dt");
  opt.t_end = cfg.number("t_end");
  if (opt.t_end < 0.0) fail(ErrorKind::configuration, "t_end must be >= 0");
  opt.n_paths = count(cfg, "n_paths", 1);
  opt.seed = cfg.unsigned_integer("seed");
  if (!cfg.is_null("absorb_at")) opt.absorb_at = cfg.number("absorb_at");
  opt.threads = static_cast<unsigned>(count(cfg, "threads", 1));
  const double lo = cfg.number("hist_min"), hi = cfg.number("hist_max");
  if (!(lo < hi)) fail(ErrorKind::configuration, "hist_min must be < hist_max");

  const LangevinEnsemble ens = langevin_ensemble(model, opt);

  std::vector<double> finite;
  finite.reserve(ens.final_x.size());
  for (std::size_t i = 0; i < ens.final_x.size(); ++i) {
    if (!ens.blown_up[i]) finite.push_back(ens.final_x[i]);
  }
  const double n = static_cast<double>(finite.size());
  double mean = std::numeric_limits<double>::quiet_NaN(), var = mean, se = mean;
  if (!finite.empty()) {
    mean = pairwise_sum(finite) / n;
    std::vector<double> sq(finite.size());
    for (std::size_t i = 0; i < finite.size(); ++i) sq[i] = (finite[i] - mean) * (finite[i] - mean);
    var = finite.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
    se = std::sqrt(var / n);
  }
  const Histogram h = histogram_density(finite, lo, hi, count(cfg, "bins", 1));

  Json j = ctx.artifact(cfg);
  j["mean"] = mean;
  j["stderr"] = se;
  j["variance"] = var;
  j["n"] = finite.size();
  j["seed"] = opt.seed;
  j["dt"] = opt.dt;
  j["absorbed"] = ens.absorbed;
  j["blown_up"] = ens.blown;
  j["outside_histogram"] = h.outside;
  if (opt.absorb_at) {
    std::vector<double> times;
    for (double t : ens.absorption_time) {
      if (!std::isnan(t)) times.push_back(t);
    }
    j["mean_absorption_time"] = times.empty() ? Json(nullptr)
                                              : Json(pairwise_sum(times) / static_cast<double>(times.size()));
  }
  if (model.confining() && !opt.absorb_at) {
    // Distance of the terminal histogram to the stationary density on the histogram window.
    const std::size_t nodes = std::max<std::size_t>(16, 20 * h.density.size() + 1);
    const auto p0 = stationary_pdf_full_line(model, Grid1D(lo, hi, nodes));
    j["l1_to_stationary"] = l1_distance(h, p0.density);
  }
  j["histogram"] = "histogram.csv";

  std::vector<double> centres(h.density.size());
  for (std::size_t i = 0; i < centres.size(); ++i) centres[i] = lo + (static_cast<double>(i) + 0.5) * h.width();
  write_xy(ctx.path("histogram.csv"), centres, h.density);
  write_json(ctx.path("langevin.json"), j);
  ctx.announce(ctx.path("langevin.json"));
}

// ---------------------------------------------------------------------------

void fp_evolve_cmd(const Context& ctx) {
  Resolved cfg = ctx.resolve(with(model_defaults(), {{"x_min", -3.0},
                                                     {"x_max", 3.0},
                                                     {"n", 601},
                                                     {"dt", 0.0},
                                                     {"t_end", 50.0},
                                                     {"sample_every", 1.0},
                                                     {"init_mean", 2.0},
                                                     {"init_sd", 0.3}}));
  const auto model = model_from(cfg);
  const Grid1D grid = grid_from(cfg);
  if (cfg.number("dt") == 0.0) cfg.set("dt", 0.4 * grid.dx() * grid.dx() / model.b);
  const double dt = cfg.positive("dt");
  const double t_end = cfg.number("t_end");
  if (t_end < 0.0) fail(ErrorKind::configuration, "t_end must be >= 0");

  const double mu = cfg.number("init_mean"), sd = cfg.positive("init_sd");
  std::vector<double> u(grid.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::exp(-0.5 * std::pow((grid.x(i) - mu) / sd, 2));
  const double mass = trapezoid(grid, u);
  for (double& x : u) x /= mass;
  const DensityOnGrid init(grid, std::move(u));

  FpOptions opt;
  opt.sample_every = cfg.positive("sample_every");
  const FpTrajectory traj = fp_evolve(model, init, t_end, dt, opt);
  const auto p0 = stationary_pdf_full_line(model, grid);

  CsvWriter csv(ctx.path("trajectory.csv"), {"t", "H", "L1", "mass"});
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& p = traj.densities[k];
    const double H = lyapunov_H(p, p0.density);
    monotone = monotone && H <= prev + 1e-10;
    prev = H;
    csv.row({traj.times[k], H, l1_distance(p, p0.density), p.normalization});
  }

  Json j = ctx.artifact(cfg);
  j["final_l1_to_stationary"] = l1_distance(traj.densities.back(), p0.density);
  j["max_mass_drift"] = traj.max_mass_drift;
  j["H_monotone"] = monotone;
  j["final"] = "final.csv";
  j["trajectory"] = "trajectory.csv";
  write_density(ctx.path("final.csv"), traj.densities.back());
  write_json(ctx.path("fp.json"), j);
  ctx.announce(ctx.path("fp.json"));
}

}  // namespace popwave::cli
