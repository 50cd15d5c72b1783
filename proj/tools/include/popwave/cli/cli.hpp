#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "popwave/cli/config.hpp"

namespace popwave::cli {

/// Exit codes of the popwave tool.
enum ExitCode : int { ok = 0, config_error = 2, numerical_error = 3 };

/// Runs one command line (argv[0] is the program name). Diagnostics go to `err` as a single
/// `popwave: error kind=<kind> msg="<text>"` line; artifacts are written under --out.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// State shared by every subcommand.
struct Context {
  std::string command;  // e.g. "pdf full"
  UserConfig user;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::ostream* log = nullptr;

  /// Resolves `defaults` against the user config, after applying --seed / --threads to keys
  /// the command actually has.
  Resolved resolve(Json defaults) const;
  /// Artifact skeleton {"command", "config"}.
  Json artifact(const Resolved& cfg) const;
  std::filesystem::path path(const std::string& file) const { return out_dir / file; }
  void announce(const std::filesystem::path& p) const;
};

void kink_build(const Context& ctx);
void kink_verify(const Context& ctx);
void coupled_closed_form(const Context& ctx);
void coupled_solve(const Context& ctx);
void pde_run(const Context& ctx);
void pdf_full(const Context& ctx);
void pdf_absorbing(const Context& ctx);
void pdf_pinned(const Context& ctx);
void exit_quad(const Context& ctx);
void exit_mc(const Context& ctx);
void langevin_run(const Context& ctx);
void fp_evolve_cmd(const Context& ctx);
void repro_fig1(const Context& ctx);
void repro_fig2(const Context& ctx);
void repro_fig3(const Context& ctx);

}  // namespace popwave::cli
