#include "popwave/cli/cli.hpp"

#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "popwave/error.hpp"

namespace popwave::cli {

Resolved Context::resolve(Json defaults) const {
  UserConfig merged = user;
  if (seed && defaults.contains("seed")) merged.set("seed", *seed);
  if (threads && defaults.contains("threads")) merged.set("threads", *threads);
  return Resolved(std::move(defaults), merged, command);
}

Json Context::artifact(const Resolved& cfg) const {
  Json j = Json::object();
  j["command"] = command;
  j["config"] = cfg.json();
  return j;
}

void Context::announce(const std::filesystem::path& p) const {
  if (log) *log << p.string() << "\n";
}

namespace {

std::string escape(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

int report(std::ostream& err, std::string_view kind, const std::string& msg, int code) {
  err << "popwave: error kind=" << kind << " msg=\"" << escape(msg) << "\"\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Travelling-wave and stochastic population dynamics toolkit", "popwave"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  app.add_option("--config", config_path, "Config file (key = value lines, or a JSON artifact)");
  app.add_option("--out", out_dir, "Output directory (created if missing)");
  app.add_option("--seed", seed, "Seed for stochastic commands (overrides the config)");
  app.add_option("--threads", threads, "Worker threads for stochastic commands")
      ->check(CLI::Range(1u, 1024u));

  std::function<void(const Context&)> action;
  std::string command;
  const auto group = [&](const std::string& name, const std::string& help,
                         std::vector<std::pair<std::string, void (*)(const Context&)>> subs) {
    auto* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    g->fallthrough();
    for (const auto& entry : subs) {
      const std::string sub = entry.first;
      const auto fn = entry.second;
      g->add_subcommand(sub)->fallthrough()->callback([&command, &action, name, sub, fn] {
        command = name + " " + sub;
        action = fn;
      });
    }
  };
  app.fallthrough();
  group("kink", "Closed-form kink waves", {{"build", kink_build}, {"verify", kink_verify}});
  group("coupled", "Three-population coupled kink",
        {{"closed-form", coupled_closed_form}, {"solve", coupled_solve}});
  group("pde", "Method-of-lines simulation", {{"run", pde_run}});
  group("pdf", "Stationary densities",
        {{"full", pdf_full}, {"absorbing", pdf_absorbing}, {"pinned", pdf_pinned}});
  group("exit", "Expected exit time", {{"quad", exit_quad}, {"mc", exit_mc}});
  group("langevin", "Euler-Maruyama ensembles", {{"run", langevin_run}});
  group("fp", "Fokker-Planck evolution", {{"evolve", fp_evolve_cmd}});
  group("repro", "Figure data", {{"fig1", repro_fig1}, {"fig2", repro_fig2}, {"fig3", repro_fig3}});

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();  // program name
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    return report(err, "configuration", e.what(), config_error);
  }

  try {
    Context ctx;
    ctx.command = command;
    if (!config_path.empty()) ctx.user = UserConfig::load(config_path);
    ctx.out_dir = out_dir;
    ctx.seed = seed;
    ctx.threads = threads;
    ctx.log = &out;
    std::error_code ec;
    std::filesystem::create_directories(ctx.out_dir, ec);
    if (ec) fail(ErrorKind::configuration, "cannot create output directory " + out_dir);
    action(ctx);
    return ok;
  } catch (const Error& e) {
    return report(err, to_string(e.kind()), e.what(),
                  is_numerical(e.kind()) ? numerical_error : config_error);
  } catch (const nlohmann::json::exception& e) {
    return report(err, "configuration", e.what(), config_error);
  } catch (const std::exception& e) {
    return report(err, "internal", e.what(), numerical_error);
  }
}

}  // namespace popwave::cli
