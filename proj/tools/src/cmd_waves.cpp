#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "common.hpp"
#include "popwave/cli/cli.hpp"
#include "popwave/cli/output.hpp"
#include "popwave/coupled_system.hpp"
#include "popwave/error.hpp"
#include "popwave/pde_sim.hpp"
#include "popwave/wave_builder.hpp"

namespace popwave::cli {

Json kink_json(const KinkSolution& s) {
  const auto& eq = s.equation();
  Json series = Json::array();
  for (double a : s.series()) series.push_back(a);
  return Json{{"P", s.P()},
              {"series", series},
              {"kernel", to_json(s.kernel())},
              {"v", eq.v},
              {"D_dag", eq.D_dag},
              {"alpha_dag", to_json(eq.alpha_dag)},
              {"physical", {{"D", eq.physical_D()}, {"alpha", to_json(eq.physical_alpha())}}},
              {"limits", {{"plus", s.limit_plus()}, {"minus", s.limit_minus()}}}};
}

std::size_t count(const Resolved& cfg, const std::string& key, std::size_t minimum) {
  const auto n = cfg.integer(key);
  if (n < static_cast<std::int64_t>(minimum)) {
    fail(ErrorKind::configuration, "key '" + key + "' must be >= " + std::to_string(minimum));
  }
  return static_cast<std::size_t>(n);
}

namespace {

// ---------------------------------------------------------------------------
// kink

Json kink_defaults(const std::string& family, bool verify) {
  Json d = Json::object();
  d["family"] = family;
  if (family == "asymptotes") {
    d["A1"] = 1.0;
    d["A2"] = 0.0;
    d["alpha2_magnitude"] = 1.0;
    d["b"] = 0.0;
    d["c"] = 1.0;
  } else if (family == "quadratic") {
    d["b"] = 0.1;
    d["c"] = 1.0;
    d["D_dag"] = 0.5;
    d["alpha1_dag"] = 0.5;
    d["alpha2_dag"] = -1.0;
  } else if (family == "quadratic_zero_alpha0") {
    d["b"] = 0.1;
    d["c"] = 1.0;
    d["alpha1_dag"] = 0.5;
    d["alpha2_dag"] = -1.0;
  } else if (family == "cubic_free") {
    d["a0"] = 0.3;
    d["a1"] = 0.8;
    d["a"] = -0.5;
    d["b"] = 0.2;
    d["c"] = 1.0;
    d["D_dag"] = 0.6;
  } else if (family == "cubic_constrained") {
    d["alpha1_dag"] = 0.5;
    d["alpha2_dag"] = 0.3;
    d["alpha3_dag"] = -0.8;
    d["D_dag"] = 0.6;
    d["b"] = 0.2;
    d["c"] = 1.0;
    d["branch"] = "principal";
  } else {
    fail(ErrorKind::configuration,
         "unknown kink family '" + family +
             "' (asymptotes, quadratic, quadratic_zero_alpha0, cubic_free, cubic_constrained)");
  }
  d["xi0"] = 0.0;
  d["v"] = 1.0;
  d["xi_min"] = -30.0;
  d["xi_max"] = 30.0;
  d["n"] = 601;
  if (verify) {
    d["tol"] = 1e-9;
    d["residual_tol"] = 1e-6;
  }
  return d;
}

std::string family_of(const Context& ctx) {
  const Json& v = ctx.user.values();
  if (!v.contains("family")) return "asymptotes";
  if (!v.at("family").is_string()) fail(ErrorKind::configuration, "key 'family' must be a string");
  return v.at("family").get<std::string>();
}

struct BuiltKink {
  KinkSolution solution;
  std::optional<double> implied_alpha0;
};

BuiltKink build_kink(const Resolved& c) {
  const std::string family = c.string("family");
  const double xi0 = c.number("xi0"), v = c.number("v");
  if (family == "asymptotes") {
    auto k = build_kink_between({.A1 = c.number("A1"),
                                 .A2 = c.number("A2"),
                                 .alpha2_magnitude = c.number("alpha2_magnitude"),
                                 .b = c.number("b"),
                                 .c = c.number("c"),
                                 .xi0 = xi0,
                                 .v = v});
    return {k.solution, k.implied_alpha0_dag};
  }
  if (family == "quadratic") {
    auto k = build_quadratic_kink({.b = c.number("b"),
                                   .c = c.number("c"),
                                   .D_dag = c.number("D_dag"),
                                   .alpha1_dag = c.number("alpha1_dag"),
                                   .alpha2_dag = c.number("alpha2_dag"),
                                   .xi0 = xi0,
                                   .v = v});
    return {k.solution, k.implied_alpha0_dag};
  }
  if (family == "quadratic_zero_alpha0") {
    return {build_quadratic_kink_zero_alpha0({.b = c.number("b"),
                                              .c = c.number("c"),
                                              .alpha1_dag = c.number("alpha1_dag"),
                                              .alpha2_dag = c.number("alpha2_dag"),
                                              .xi0 = xi0,
                                              .v = v}),
            std::nullopt};
  }
  if (family == "cubic_free") {
    const RiccatiKernel kernel(c.number("a"), c.number("b"), c.number("c"), xi0);
    return {build_cubic_kink_free(c.number("a0"), c.number("a1"), kernel, c.number("D_dag"), v),
            std::nullopt};
  }
  const std::string branch = c.string("branch");
  if (branch != "principal" && branch != "conjugate") {
    fail(ErrorKind::configuration, "branch must be 'principal' or 'conjugate'");
  }
  auto k = build_cubic_kink_constrained(
      {.alpha1_dag = c.number("alpha1_dag"),
       .alpha2_dag = c.number("alpha2_dag"),
       .alpha3_dag = c.number("alpha3_dag"),
       .D_dag = c.number("D_dag"),
       .b = c.number("b"),
       .c = c.number("c"),
       .xi0 = xi0,
       .v = v,
       .branch = branch == "principal" ? RootBranch::principal : RootBranch::conjugate});
  return {k.solution, k.implied_alpha0_dag};
}

Json kink_artifact(const Context& ctx, const Resolved& cfg, const BuiltKink& k) {
  Json j = ctx.artifact(cfg);
  j["kink"] = kink_json(k.solution);
  j["kink"]["implied_alpha0_dag"] =
      k.implied_alpha0 ? Json(*k.implied_alpha0) : Json(nullptr);
  return j;
}

}  // namespace

void kink_build(const Context& ctx) {
  const Resolved cfg = ctx.resolve(kink_defaults(family_of(ctx), false));
  const BuiltKink k = build_kink(cfg);
  const auto xs = linspace(cfg.number("xi_min"), cfg.number("xi_max"), count(cfg, "n", 2));
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = k.solution(xs[i]);

  Json j = kink_artifact(ctx, cfg, k);
  j["profile"] = "kink.csv";
  write_xy(ctx.path("kink.csv"), xs, ys);
  write_json(ctx.path("kink.json"), j);
  ctx.announce(ctx.path("kink.json"));
}

void kink_verify(const Context& ctx) {
  const Resolved cfg = ctx.resolve(kink_defaults(family_of(ctx), true));
  const BuiltKink k = build_kink(cfg);
  const SigmaCollection sig =
      collect_sigma(k.solution.series(), k.solution.kernel(), k.solution.equation());
  const double residual = wave_residual_numeric(k.solution, cfg.number("xi_min"),
                                                cfg.number("xi_max"), count(cfg, "n", 16));
  const double rel = sig.max_relative();
  const bool pass = rel < cfg.positive("tol") && residual < cfg.positive("residual_tol");

  Json j = kink_artifact(ctx, cfg, k);
  j["sigma"] = sig.sigma;
  j["sigma_scale"] = sig.scale;
  j["sigma_max_relative"] = rel;
  j["residual_numeric"] = residual;
  j["pass"] = pass;
  write_json(ctx.path("verify.json"), j);
  ctx.announce(ctx.path("verify.json"));
  if (!pass) {
    fail(ErrorKind::verification, "kink fails verification: sigma relative " + format_double(rel) +
                                      ", numeric residual " + format_double(residual));
  }
}

// ---------------------------------------------------------------------------
// coupled

namespace {

Json unknowns_json(const CoupledUnknowns& u) {
  Json j = Json::object();
  for (std::size_t i = 0; i < CoupledUnknowns::size; ++i) j[CoupledUnknowns::names[i]] = u[i];
  return j;
}

Json params_json(const LV3Params& p) {
  Json r = Json::array(), A = Json::array(), D = Json::array();
  for (int i = 0; i < 3; ++i) {
    r.push_back(p.r(i));
    for (int k = 0; k < 3; ++k) {
      A.push_back(p.A(i, k));
      D.push_back(p.D(i, k));
    }
  }
  return Json{{"r", r}, {"A", A}, {"D", D}};
}

double sup(const std::array<double, 9>& r) {
  double m = 0.0;
  for (double x : r) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

void coupled_closed_form(const Context& ctx) {
  const Resolved cfg = ctx.resolve(Json{{"a1", 1.0}, {"b1", 2.0}, {"c0", 0.5}, {"b", 1.0},
                                        {"D11", 1.0}, {"xi0", 0.0}, {"xi_min", -20.0},
                                        {"xi_max", 20.0}, {"n", 401}});
  const CoupledKinkSolution sol =
      closed_form(cfg.number("a1"), cfg.number("b1"), cfg.number("c0"), cfg.number("b"),
                  cfg.number("D11"), cfg.number("xi0"));
  const auto res = build_residuals(sol.params, sol.unknowns);

  Json j = ctx.artifact(cfg);
  j["unknowns"] = unknowns_json(sol.unknowns);
  j["residuals"] = res;
  j["residual_norm"] = sup(res);
  j["params"] = params_json(sol.params);
  j["kernel"] = to_json(sol.kernel);
  j["limits"] = {{"plus", sol.limit_plus()}, {"minus", sol.limit_minus()}};
  j["profile"] = "coupled.csv";

  CsvWriter csv(ctx.path("coupled.csv"), {"x", "rho1", "rho2", "rho3"});
  for (double xi : linspace(cfg.number("xi_min"), cfg.number("xi_max"), count(cfg, "n", 2))) {
    const auto r = sol(xi);
    csv.row({xi, r[0], r[1], r[2]});
  }
  write_json(ctx.path("coupled.json"), j);
  ctx.announce(ctx.path("coupled.json"));
}

void coupled_solve(const Context& ctx) {
  Json names = Json::array({"a0", "b0", "c1", "a", "c", "v"});
  Resolved cfg = ctx.resolve(Json{{"r", {1.0, 1.0, 1.0}},
                                  {"A", Json(std::vector<double>(9, 1.0))},
                                  {"D", Json(std::vector<double>(9, 1.0))},
                                  {"guess", Json::array()},
                                  {"perturb", 0.01},
                                  {"free", names},
                                  {"tol", 1e-10},
                                  {"max_iter", 50},
                                  {"starts", 1},
                                  {"amplitude", 0.01},
                                  {"seed", 0},
                                  {"threads", 1}});
  LV3Params p;
  const auto r = cfg.list("r"), A = cfg.list("A"), D = cfg.list("D");
  if (r.size() != 3 || A.size() != 9 || D.size() != 9) {
    fail(ErrorKind::configuration, "r needs 3 entries, A and D need 9 (row-major)");
  }
  for (int i = 0; i < 3; ++i) {
    p.r(i) = r[static_cast<std::size_t>(i)];
    for (int k = 0; k < 3; ++k) {
      p.A(i, k) = A[static_cast<std::size_t>(3 * i + k)];
      p.D(i, k) = D[static_cast<std::size_t>(3 * i + k)];
    }
  }

  CoupledUnknowns guess;
  auto g = cfg.list("guess");
  if (g.empty()) {
    // Closed-form root of the symmetric configuration, uniformly offset; made explicit in the echo.
    guess = closed_form(1.0, 2.0, 0.5, 1.0, p.D(0, 0)).unknowns;
    const double off = cfg.number("perturb");
    Json explicit_guess = Json::array();
    for (std::size_t i = 0; i < CoupledUnknowns::size; ++i) {
      guess[i] += off;
      explicit_guess.push_back(guess[i]);
    }
    cfg.set("guess", explicit_guess);
  } else {
    if (g.size() != CoupledUnknowns::size) {
      fail(ErrorKind::configuration, "guess needs 10 entries (a0, a1, b0, b1, c0, c1, a, b, c, v)");
    }
    for (std::size_t i = 0; i < g.size(); ++i) guess[i] = g[i];
  }

  NewtonOptions opt;
  opt.tol = cfg.positive("tol");
  opt.max_iter = static_cast<int>(cfg.integer("max_iter"));
  opt.free.clear();
  for (const auto& name : cfg.json().at("free")) {
    if (!name.is_string()) fail(ErrorKind::configuration, "free must list unknown names");
    const auto& all = CoupledUnknowns::names;
    const auto it = std::find(all.begin(), all.end(), name.get<std::string>());
    if (it == all.end()) fail(ErrorKind::configuration, "unknown name in free: " + name.get<std::string>());
    opt.free.push_back(static_cast<std::size_t>(it - all.begin()));
  }

  Json j = ctx.artifact(cfg);
  j["params"] = params_json(p);
  const auto starts = count(cfg, "starts", 1);
  if (starts == 1) {
    const NewtonResult res = newton_solve(p, guess, opt);
    j["unknowns"] = unknowns_json(res.unknowns);
    j["residual_norm"] = res.residual_norm;
    j["iterations"] = res.iterations;
  } else {
    MultiStartOptions ms;
    ms.starts = starts;
    ms.amplitude = cfg.number("amplitude");
    ms.seed = cfg.unsigned_integer("seed");
    ms.threads = static_cast<unsigned>(count(cfg, "threads", 1));
    const auto roots = newton_multi_start(p, guess, opt, ms);
    if (roots.empty()) fail(ErrorKind::non_convergence, "no start converged");
    Json list = Json::array();
    for (const auto& root : roots) {
      list.push_back({{"unknowns", unknowns_json(root.unknowns)},
                      {"residual_norm", root.residual_norm},
                      {"iterations", root.iterations}});
    }
    j["unknowns"] = list.front()["unknowns"];
    j["residual_norm"] = list.front()["residual_norm"];
    j["roots"] = list;
  }
  write_json(ctx.path("coupled_solve.json"), j);
  ctx.announce(ctx.path("coupled_solve.json"));
}

// ---------------------------------------------------------------------------
// pde run

namespace {

Json pde_defaults(const std::string& model) {
  Json d = Json::object();
  d["model"] = model;
  if (model == "kink") {
    d["A1"] = 1.0;
    d["A2"] = 0.0;
    d["alpha2_magnitude"] = 1.0;
    d["b"] = 0.0;
    d["c"] = 1.0;
    d["xi0"] = 0.0;
    d["v"] = 1.0;
    d["x_min"] = -40.0;
    d["x_max"] = 40.0;
    d["n"] = 4001;
    d["bc"] = "fixed";
    d["t_end"] = 6.0;
  } else if (model == "scalar") {
    d["D"] = 1.0;
    d["alpha"] = {0.0, 1.0, -1.0};
    d["init"] = "gaussian";
    d["amplitude"] = 1.0;
    d["center"] = 0.0;
    d["width"] = 1.0;
    d["x_min"] = -20.0;
    d["x_max"] = 20.0;
    d["n"] = 801;
    d["bc"] = "zero_gradient";
    d["t_end"] = 5.0;
  } else if (model == "lv3_kink") {
    d["a1"] = 1.0;
    d["b1"] = 2.0;
    d["c0"] = 0.5;
    d["b"] = 1.0;
    d["D11"] = 1.0;
    d["xi0"] = 0.0;
    d["x_min"] = -40.0;
    d["x_max"] = 40.0;
    d["n"] = 4001;
    d["bc"] = "fixed";
    d["t_end"] = 2.0;
  } else if (model == "lv3") {
    d["r"] = {1.0, 1.0, 1.0};
    d["A"] = std::vector<double>(9, 1.0);
    d["D"] = std::vector<double>(9, 1.0);
    d["rho0"] = {0.2, 0.3, 0.1};
    d["x_min"] = 0.0;
    d["x_max"] = 10.0;
    d["n"] = 101;
    d["bc"] = "zero_gradient";
    d["t_end"] = 5.0;
  } else {
    fail(ErrorKind::configuration, "unknown pde model '" + model + "' (kink, scalar, lv3_kink, lv3)");
  }
  d["dt"] = 0.0;
  d["times"] = Json::array();
  return d;
}

LV3Params lv3_from(const Resolved& cfg) {
  const auto r = cfg.list("r"), A = cfg.list("A"), D = cfg.list("D");
  if (r.size() != 3 || A.size() != 9 || D.size() != 9) {
    fail(ErrorKind::configuration, "r needs 3 entries, A and D need 9 (row-major)");
  }
  LV3Params p;
  for (int i = 0; i < 3; ++i) {
    p.r(i) = r[static_cast<std::size_t>(i)];
    for (int k = 0; k < 3; ++k) {
      p.A(i, k) = A[static_cast<std::size_t>(3 * i + k)];
      p.D(i, k) = D[static_cast<std::size_t>(3 * i + k)];
    }
  }
  return p;
}

}  // namespace

void pde_run(const Context& ctx) {
  std::string model_name = "kink";
  if (ctx.user.contains("model")) {
    const Json& m = ctx.user.values().at("model");
    if (!m.is_string()) fail(ErrorKind::configuration, "key 'model' must be a string");
    model_name = m.get<std::string>();
  }
  Resolved cfg = ctx.resolve(pde_defaults(model_name));
  const Grid1D grid(cfg.number("x_min"), cfg.number("x_max"), count(cfg, "n", 16));
  const auto xs = grid.nodes();

  // Each model provides the PDE, initial components and (optionally) the exact travelling solution.
  std::optional<PdeModel> model;
  std::vector<std::vector<double>> init;
  std::function<std::vector<double>(double x, double t)> exact;
  double front_level = std::numeric_limits<double>::quiet_NaN();
  Json model_json = Json::object();

  if (model_name == "kink") {
    const auto k = build_kink_between({.A1 = cfg.number("A1"),
                                       .A2 = cfg.number("A2"),
                                       .alpha2_magnitude = cfg.number("alpha2_magnitude"),
                                       .b = cfg.number("b"),
                                       .c = cfg.number("c"),
                                       .xi0 = cfg.number("xi0"),
                                       .v = cfg.number("v")});
    const auto& eq = k.solution.equation();
    Eigen::MatrixXd D(1, 1);
    D(0, 0) = eq.physical_D();
    model = PdeModel{D, MultiPolynomial::from_scalar(eq.physical_alpha()), std::nullopt};
    const KinkSolution sol = k.solution;
    const double v = eq.v;
    exact = [sol, v](double x, double t) { return std::vector<double>{sol(x - v * t)}; };
    front_level = 0.5 * (cfg.number("A1") + cfg.number("A2"));
    model_json = {{"D", eq.physical_D()}, {"alpha", to_json(eq.physical_alpha())}, {"v", v},
                  {"kink", kink_json(sol)}};
  } else if (model_name == "scalar") {
    Eigen::MatrixXd D(1, 1);
    D(0, 0) = cfg.number("D");
    const Polynomial alpha(cfg.list("alpha"));
    model = PdeModel{D, MultiPolynomial::from_scalar(alpha), std::nullopt};
    const std::string how = cfg.string("init");
    std::vector<double> u(xs.size());
    const double amp = cfg.number("amplitude"), c0 = cfg.number("center");
    if (how == "gaussian") {
      const double w = cfg.positive("width");
      for (std::size_t i = 0; i < xs.size(); ++i) u[i] = amp * std::exp(-0.5 * std::pow((xs[i] - c0) / w, 2));
    } else if (how == "constant") {
      std::fill(u.begin(), u.end(), amp);
    } else {
      fail(ErrorKind::configuration, "init must be 'gaussian' or 'constant'");
    }
    init = {u};
    model_json = {{"D", D(0, 0)}, {"alpha", to_json(alpha)}};
  } else if (model_name == "lv3_kink") {
    const auto sol = closed_form(cfg.number("a1"), cfg.number("b1"), cfg.number("c0"),
                                 cfg.number("b"), cfg.number("D11"), cfg.number("xi0"));
    model = PdeModel{Eigen::MatrixXd::Zero(3, 3), lv3_wave_field(sol.params),
                     Eigen::MatrixXd(sol.params.D)};
    const double v = sol.unknowns.v;
    exact = [sol, v](double x, double t) {
      const auto r = sol(x - v * t);
      return std::vector<double>(r.begin(), r.end());
    };
    const auto lp = sol.limit_plus(), lm = sol.limit_minus();
    front_level = 0.5 * (lp[0] + lm[0]);
    model_json = {{"transport", params_json(sol.params)["D"]}, {"v", v},
                  {"unknowns", unknowns_json(sol.unknowns)}};
  } else {
    const LV3Params p = lv3_from(cfg);
    model = PdeModel{Eigen::MatrixXd::Zero(3, 3), lv3_competition_field(p), Eigen::MatrixXd(p.D)};
    const auto rho0 = cfg.list("rho0");
    if (rho0.size() != 3) fail(ErrorKind::configuration, "rho0 needs 3 entries");
    for (double r0 : rho0) init.emplace_back(xs.size(), r0);
    model_json = params_json(p);
  }
  if (exact) {
    init.assign(model->populations(), std::vector<double>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto r = exact(xs[i], 0.0);
      for (std::size_t k = 0; k < r.size(); ++k) init[k][i] = r[k];
    }
  }

  BoundaryCondition bc;
  const std::string bc_name = cfg.string("bc");
  if (bc_name == "fixed") {
    bc.kind = BoundaryCondition::Kind::fixed_value;
  } else if (bc_name != "zero_gradient") {
    fail(ErrorKind::configuration, "bc must be 'fixed' or 'zero_gradient'");
  }

  const double t_end = cfg.number("t_end");
  if (t_end < 0.0) fail(ErrorKind::configuration, "t_end must be >= 0");
  double dt = cfg.number("dt");
  if (dt == 0.0) {
    const double bound = max_stable_dt(*model, grid);
    dt = std::isfinite(bound) ? 0.5 * bound : std::max(t_end, 1.0) * 1e-3;
    cfg.set("dt", dt);
  }
  auto times = cfg.list("times");
  if (times.empty()) {
    times = {0.0, t_end};
    cfg.set("times", times);
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || times[i] > t_end || (i > 0 && times[i] < times[i - 1])) {
      fail(ErrorKind::configuration, "times must be ascending within [0, t_end]");
    }
  }

  Json j = ctx.artifact(cfg);
  j["grid"] = {{"x_min", grid.x_min()}, {"x_max", grid.x_max()}, {"n", grid.size()}, {"dx", grid.dx()}};
  j["dt"] = dt;
  j["bc"] = bc_name;
  j["model"] = model_json;
  Json snaps = Json::array();

  std::vector<std::string> header{"x"};
  for (std::size_t k = 0; k < model->populations(); ++k) header.push_back("rho" + std::to_string(k + 1));

  Field1D field(grid, init);
  std::vector<double> fronts, front_times;
  for (std::size_t s = 0; s < times.size(); ++s) {
    field = integrate(*model, std::move(field), times[s], dt, bc);
    const std::string file = "snapshot_" + std::to_string(s) + ".csv";
    CsvWriter csv(ctx.path(file), header);
    std::vector<double> row(header.size());
    double err = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      row[0] = xs[i];
      const auto ex = exact ? exact(xs[i], times[s]) : std::vector<double>{};
      for (std::size_t k = 0; k < model->populations(); ++k) {
        row[k + 1] = field.components[k][i];
        if (exact) err = std::max(err, std::abs(row[k + 1] - ex[k]));
      }
      csv.row(row);
    }
    Json snap = {{"t", times[s]}, {"file", file}};
    if (exact) {
      snap["max_error"] = err;
      const double f = front_position(field, 0, front_level);
      snap["front"] = f;
      fronts.push_back(f);
      front_times.push_back(times[s]);
    }
    snaps.push_back(snap);
  }
  j["snapshots"] = snaps;
  if (fronts.size() >= 2 && front_times.back() > front_times.front()) {
    j["measured_speed"] = (fronts.back() - fronts.front()) / (front_times.back() - front_times.front());
  }
  write_json(ctx.path("run.json"), j);
  ctx.announce(ctx.path("run.json"));
}

}  // namespace popwave::cli
