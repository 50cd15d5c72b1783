#include <array>
#include <string>
#include <vector>

#include "common.hpp"
#include "popwave/cli/cli.hpp"
#include "popwave/cli/output.hpp"
#include "popwave/stochastic.hpp"
#include "popwave/wave_builder.hpp"

namespace popwave::cli {

void repro_fig1(const Context& ctx) {
  const Resolved cfg = ctx.resolve(Json{{"alpha2_magnitude", 1.0}, {"b", 0.0}, {"c", 1.0},
                                        {"v", 1.0}, {"xi_min", -30.0}, {"xi_max", 30.0},
                                        {"n", 601}});
  // Solid, dashed, dot-dashed, dot-double-dashed.
  constexpr std::array<std::array<double, 2>, 4> pairs{{{1.5, 0.5}, {1.0, 0.0}, {1.5, 0.0}, {0.0, 2.0}}};
  const auto xs = linspace(cfg.number("xi_min"), cfg.number("xi_max"), count(cfg, "n", 16));

  Json j = ctx.artifact(cfg);
  Json curves = Json::array();
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    const auto k = build_kink_between({.A1 = pairs[c][0],
                                       .A2 = pairs[c][1],
                                       .alpha2_magnitude = cfg.number("alpha2_magnitude"),
                                       .b = cfg.number("b"),
                                       .c = cfg.number("c"),
                                       .xi0 = 0.0,
                                       .v = cfg.number("v")});
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = k.solution(xs[i]);
    const std::string file = "fig1_" + std::to_string(c + 1) + ".csv";
    write_xy(ctx.path(file), xs, ys);

    Json entry = {{"file", file}, {"A1", pairs[c][0]}, {"A2", pairs[c][1]}};
    entry["kink"] = kink_json(k.solution);
    entry["kink"]["implied_alpha0_dag"] = k.implied_alpha0_dag;
    entry["end_values"] = {ys.front(), ys.back()};
    entry["residual_numeric"] =
        wave_residual_numeric(k.solution, xs.front(), xs.back(), xs.size());
    curves.push_back(entry);
  }
  j["curves"] = curves;
  write_json(ctx.path("fig1.json"), j);
  ctx.announce(ctx.path("fig1.json"));
}

void repro_fig2(const Context& ctx) {
  const Resolved cfg = ctx.resolve(Json{{"b", 2.0}, {"n", 7001}});
  struct Set {
    const char* name;
    std::vector<double> alpha;
    double lo, hi;
  };
  const std::vector<Set> sets{
      {"a", {0.0, 1.0, -0.4, 0.2, 0.0, -0.5}, -3.0, 3.0},
      {"b", {0.0, 1.0, 0.0, 0.2, 0.0, -0.5}, -3.0, 3.0},
      {"c", {0.003564, -0.006084, 0.3975, -1.234, 1.81, -1.0}, -3.0, 4.0},
      {"d", {1.2936, -7.2436, 14.58, -13.63, 6.0, -1.0}, -2.0, 4.5},
  };
  const std::size_t n = count(cfg, "n", 16);

  Json j = ctx.artifact(cfg);
  Json out = Json::array();
  for (const auto& s : sets) {
    const DiffusionModel1D model(Polynomial(s.alpha), cfg.positive("b"));
    const auto pdf = stationary_pdf_full_line(model, Grid1D(s.lo, s.hi, n));
    const std::string file = std::string("fig2_") + s.name + ".csv";
    write_xy(ctx.path(file), pdf.density.grid.nodes(), pdf.density.values);

    Json ex = Json::array();
    for (const auto& e : pdf_extrema(pdf.density)) {
      ex.push_back({{"x", e.x}, {"kind", e.kind == Extremum::Kind::maximum ? "maximum" : "minimum"}});
    }
    Json roots = Json::array();
    for (double r : real_roots(model.drift, s.lo, s.hi)) roots.push_back(r);
    Json alpha = Json::array();
    for (double a : s.alpha) alpha.push_back(a);
    out.push_back({{"set", s.name},
                   {"file", file},
                   {"alpha", alpha},
                   {"x_min", s.lo},
                   {"x_max", s.hi},
                   {"extrema", ex},
                   {"drift_roots", roots},
                   {"edge_ratio", pdf.edge_ratio}});
  }
  j["sets"] = out;
  write_json(ctx.path("fig2.json"), j);
  ctx.announce(ctx.path("fig2.json"));
}

void repro_fig3(const Context& ctx) {
  const Resolved cfg = ctx.resolve(Json{{"b", 2.0}, {"q", 0.0}, {"rho_max", 6.0}, {"points", 61}});
  const double q = cfg.number("q");
  const auto rho = linspace(q, cfg.number("rho_max"), count(cfg, "points", 2));

  struct Curve {
    std::string file;
    std::vector<double> alpha;
  };
  std::vector<Curve> curves;
  const std::array<double, 4> a3{-0.05, -0.04, -0.03, -0.02};
  const std::array<double, 4> a1{-0.3, -0.4, -0.5, -0.6};
  for (std::size_t i = 0; i < 4; ++i) {
    curves.push_back({"fig3a_" + std::to_string(i + 1) + ".csv", {0.01, 0.2, 0.1, a3[i]}});
  }
  for (std::size_t i = 0; i < 4; ++i) {
    curves.push_back({"fig3b_" + std::to_string(i + 1) + ".csv", {0.01, a1[i], 0.1, -0.02}});
  }

  Json j = ctx.artifact(cfg);
  Json out = Json::array();
  for (const auto& c : curves) {
    const DiffusionModel1D model(Polynomial(c.alpha), cfg.positive("b"));
    const auto F = exit_time_curve(model, q, rho);
    write_xy(ctx.path(c.file), rho, F);
    bool increasing = true;
    for (std::size_t i = 1; i < F.size(); ++i) increasing = increasing && F[i] > F[i - 1];
    Json alpha = Json::array();
    for (double a : c.alpha) alpha.push_back(a);
    out.push_back({{"file", c.file}, {"alpha", alpha}, {"increasing", increasing}, {"F_at_rho_max", F.back()}});
  }
  j["curves"] = out;
  write_json(ctx.path("fig3.json"), j);
  ctx.announce(ctx.path("fig3.json"));
}

}  // namespace popwave::cli
