// kpb: band structure of the generalized Kronig-Penney model.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kpb/cli/commands.hpp"
#include "kpb/cli/config.hpp"

using namespace kpb::cli;

namespace {

struct Flags {
  std::optional<std::string> config_path;
  CliOverrides overrides;
};

void add_common_flags(CLI::App* sub, Flags& f) {
  auto& o = f.overrides;
  sub->add_option("--config", f.config_path, "JSON run configuration");
  sub->add_option("--family", o.family, "delta | epsilon | rotation | hyperbolic | raw");
  sub->add_option("--param", o.param, "family parameter (v, u or p)");
  sub->add_option("--param-range", o.param_range, "sweep range lo:hi:n");
  sub->add_option("--matrix", o.matrix, "raw connection matrix g,d,b,al");
  sub->add_option("--mass", o.mass, "particle mass (default 0.5)");
  sub->add_option("--lattice", o.lattice, "lattice spacing (default 1.0)");
  sub->add_option("--window", o.window, "axis window lo:hi");
  sub->add_option("--grid", o.grid, "number of grid points along the window");
  sub->add_option("--mode", o.mode, "sweep axis: E or k0");
  sub->add_option("--out", o.out, "output CSV path (stdout when omitted)");
  sub->add_option("--svg", o.svg, "SVG heatmap path (sweep)");
  sub->add_option("--seed", o.seed, "RNG seed (verify)");
  sub->add_flag("--strict-missed-bands", o.strict_missed_bands, "exit 3 when sub-grid bands are reported");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Kronig-Penney band structure engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", KPB_VERSION_STRING);

  Flags flags;
  struct Entry {
    Command command;
    const char* help;
    CLI::App* app = nullptr;
  };
  Entry entries[] = {
      {Command::bands, "list allowed bands in an energy window"},
      {Command::sweep, "allowed/forbidden raster over a family parameter"},
      {Command::dispersion, "reduced-zone Bloch dispersion k(E) per band"},
      {Command::transmission, "single-obstacle transmission and reflection probabilities"},
      {Command::verify, "run the oracle battery"},
  };
  for (auto& e : entries) {
    e.app = app.add_subcommand(std::string(to_string(e.command)), e.help);
    add_common_flags(e.app, flags);
  }
  entries[2].app->add_option("--points", flags.overrides.points, "samples per band (default 101)");
  entries[3].app->add_option("--scale", flags.overrides.scale, "k0 grid spacing: linear or log (default log)");
  entries[4].app->add_option("--samples", flags.overrides.samples, "random samples per check (default 1000)");
  entries[4].app->add_option("--tolerance", flags.overrides.tolerance, "override every residual threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  RunConfig config;
  try {
    if (flags.config_path) config = load_config_file(*flags.config_path);
    apply_overrides(config, flags.overrides);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  for (const auto& e : entries) {
    if (e.app->parsed()) return run_command(e.command, config, std::cout, std::cerr);
  }
  return kExitConfigError;
}
