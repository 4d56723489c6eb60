#include "kpb/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "kpb/bands.hpp"
#include "kpb/cli/format.hpp"
#include "kpb/cli/sweep.hpp"
#include "kpb/oracle.hpp"
#include "kpb/scattering.hpp"

#ifndef KPB_VERSION
#define KPB_VERSION "dev"
#endif

namespace kpb::cli {

std::string_view to_string(Command command) {
  switch (command) {
    case Command::bands: return "bands";
    case Command::sweep: return "sweep";
    case Command::dispersion: return "dispersion";
    case Command::transmission: return "transmission";
    case Command::verify: return "verify";
  }
  return "unknown";
}

namespace {

struct Window {
  double min;
  double max;
  std::size_t n;
};

Window resolve_window(const RunConfig& c, double def_min, double def_max, std::size_t def_n) {
  Window w{c.window.min.value_or(def_min), c.window.max.value_or(def_max), c.window.n.value_or(def_n)};
  if (!(w.min < w.max)) throw ConfigError("window: need min < max");
  if (w.n < 2) throw ConfigError("window: need at least 2 grid points");
  return w;
}

void write_manifest(const RunConfig& c, Command command, const std::string& data_path) {
  std::ofstream m(data_path + ".manifest.json");
  if (!m) throw ConfigError("cannot write manifest next to '" + data_path + "'");
  const nlohmann::json doc = {{"tool", "kpb"},
                              {"version", KPB_VERSION},
                              {"command", std::string(to_string(command))},
                              {"config", config_to_json(c)}};
  m << doc.dump(2) << '\n';
}

// Writes to csv_path (plus manifest) when configured, otherwise to `out`.
void emit(const RunConfig& c, Command command, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (!c.csv_path) {
    body(out);
    return;
  }
  std::ofstream file(*c.csv_path, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + *c.csv_path + "'");
  body(file);
  write_manifest(c, command, *c.csv_path);
}

int report_warnings(const RunConfig& c, const std::vector<MissedBandWarning>& warnings, std::ostream& err) {
  for (const auto& w : warnings) {
    err << "warning: [" << format_double(w.E_lo) << ", " << format_double(w.E_hi) << "] " << w.message << '\n';
  }
  return !warnings.empty() && c.strict_missed_bands ? kExitEscalatedWarning : kExitOk;
}

BandSearchResult search_bands(const RunConfig& c) {
  const Window w = resolve_window(c, kDefaultWindowMin, kDefaultWindowMax, kDefaultGridPoints);
  return find_band_edges(c.connection(), c.lattice(), w.min, w.max, w.n);
}

}  // namespace

int cmd_bands(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const LatticeParams lat = c.lattice();
  const BandSearchResult found = search_bands(c);
  emit(c, Command::bands, out, [&](std::ostream& os) {
    os << "band_index,E_lo,E_hi,edge_lo,edge_hi,width_E,width_k0\n";
    for (const Band& b : found.bands) {
      const double wk = signed_wavenumber(b.E_hi, lat) - signed_wavenumber(b.E_lo, lat);
      os << b.index << ',' << format_double(b.E_lo) << ',' << format_double(b.E_hi) << ',' << to_string(b.edge_lo)
         << ',' << to_string(b.edge_hi) << ',' << format_double(b.width()) << ',' << format_double(wk) << '\n';
    }
  });
  return report_warnings(c, found.warnings, err);
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream&) {
  const LatticeParams lat = c.lattice();
  if (c.family.kind == FamilyKind::raw) throw ConfigError("sweep needs a one-parameter family, not 'raw'");
  std::vector<double> params;
  if (c.family.param_range) {
    const ParamRange& r = *c.family.param_range;
    if (r.n < 2 || !(r.lo < r.hi)) throw ConfigError("param-range: need lo < hi and n >= 2");
    params = linspace(r.lo, r.hi, r.n);
  } else {
    params = default_param_axis(c.family.kind, kDefaultSweepParams);
  }
  const bool energy_mode = c.mode == AxisMode::energy;
  const Window w = resolve_window(c, energy_mode ? kDefaultWindowMin : 0.0, energy_mode ? kDefaultWindowMax : 40.0,
                                  kDefaultSweepAxis);
  const std::vector<double> axis = linspace(w.min, w.max, w.n);
  const SweepGrid grid = compute_sweep(c.family.kind, params, axis, c.mode, lat);

  emit(c, Command::sweep, out, [&](std::ostream& os) { write_sweep_csv(grid, os); });
  if (c.svg_path) {
    std::ofstream svg(*c.svg_path, std::ios::binary);
    if (!svg) throw ConfigError("cannot open SVG file '" + *c.svg_path + "'");
    write_sweep_svg(grid, svg);
  }
  return kExitOk;
}

int cmd_dispersion(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const LatticeParams lat = c.lattice();
  const ContactInteraction v = c.connection();
  if (c.points < 2) throw ConfigError("points: need at least 2 per band");
  const BandSearchResult found = search_bands(c);
  std::vector<std::vector<DispersionPoint>> curves;
  for (const Band& b : found.bands) curves.push_back(dispersion_curve(b, v, lat, c.points));
  emit(c, Command::dispersion, out, [&](std::ostream& os) {
    os << "band_index,k,E\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
      for (const DispersionPoint& p : curves[i]) {
        os << found.bands[i].index << ',' << format_double(p.k) << ',' << format_double(p.E) << '\n';
      }
    }
  });
  return report_warnings(c, found.warnings, err);
}

int cmd_transmission(const RunConfig& c, std::ostream& out, std::ostream&) {
  const LatticeParams lat = c.lattice();
  const ContactInteraction v = c.connection();
  const Window w = resolve_window(c, 0.01, 100.0, 201);
  if (!(w.min > 0.0)) throw ConfigError("transmission: k0 grid must be strictly positive");
  std::vector<double> k0s;
  if (c.scale == GridScale::linear) {
    k0s = linspace(w.min, w.max, w.n);
  } else {
    const std::vector<double> exps = linspace(std::log10(w.min), std::log10(w.max), w.n);
    for (std::size_t i = 0; i < exps.size(); ++i) {
      k0s.push_back(i == 0 ? w.min : i + 1 == exps.size() ? w.max : std::pow(10.0, exps[i]));
    }
  }
  const std::vector<ScatteringResult> rows = limit_profile(v, lat, k0s);
  emit(c, Command::transmission, out, [&](std::ostream& os) {
    os << "k0,T2,R2\n";
    for (const ScatteringResult& r : rows) {
      os << format_double(r.k0) << ',' << format_double(r.T2) << ',' << format_double(r.R2) << '\n';
    }
  });
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  oracle::VerifyOptions opt;
  opt.seed = c.seed;
  opt.samples = c.samples;
  opt.lattice = c.lattice();
  opt.closed_form_tolerance = c.tolerances.oracle;
  opt.bloch_tolerance = c.tolerances.bloch;
  opt.biortho_tolerance = c.tolerances.biorthogonal;
  opt.transmission_tolerance = c.tolerances.transmission;
  opt.tolerance_override = c.tolerances.verify;
  const oracle::VerifyReport report = oracle::run_verification(opt);

  emit(c, Command::verify, out, [&](std::ostream& os) {
    os << "check,value,threshold,bound,status\n";
    for (const auto& check : report.checks) {
      os << check.name << ',' << format_double(check.value) << ',' << format_double(check.threshold) << ','
         << (check.lower_bound ? "min" : "max") << ',' << (check.passed() ? "PASS" : "FAIL") << '\n';
    }
  });
  if (!report.passed()) {
    err << "verify: one or more residual checks failed\n";
    return kExitResidualFailure;
  }
  return kExitOk;
}

int run_command(Command command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (command) {
      case Command::bands: return cmd_bands(config, out, err);
      case Command::sweep: return cmd_sweep(config, out, err);
      case Command::dispersion: return cmd_dispersion(config, out, err);
      case Command::transmission: return cmd_transmission(config, out, err);
      case Command::verify: return cmd_verify(config, out, err);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitResidualFailure;
  }
  return kExitConfigError;
}

}  // namespace kpb::cli
