#include "kpb/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <vector>

namespace kpb::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + ": must be finite");
  return v;
}

std::size_t get_count(const json& j, const std::string& where) {
  if (!j.is_number_unsigned()) throw ConfigError(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a string");
  return j.get<std::string>();
}

double parse_double(std::string_view text, const std::string& where) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(where + ": cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view text, const std::string& where) {
  std::size_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(where + ": cannot parse count '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

FamilyKind family_from_string(const std::string& s) {
  try {
    return parse_family_kind(s);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

AxisMode parse_axis_mode(const std::string& text) {
  if (text == "E") return AxisMode::energy;
  if (text == "k0") return AxisMode::wavenumber;
  throw ConfigError("mode must be 'E' or 'k0', got '" + text + "'");
}

std::string to_string(AxisMode mode) { return mode == AxisMode::energy ? "E" : "k0"; }

GridScale parse_grid_scale(const std::string& text) {
  if (text == "linear") return GridScale::linear;
  if (text == "log") return GridScale::log;
  throw ConfigError("scale must be 'linear' or 'log', got '" + text + "'");
}

std::string to_string(GridScale scale) { return scale == GridScale::linear ? "linear" : "log"; }

ParamRange parse_param_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError("param-range: expected lo:hi:n, got '" + text + "'");
  return {parse_double(parts[0], "param-range"), parse_double(parts[1], "param-range"),
          parse_count(parts[2], "param-range")};
}

std::pair<double, double> parse_window(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw ConfigError("window: expected lo:hi, got '" + text + "'");
  return {parse_double(parts[0], "window"), parse_double(parts[1], "window")};
}

std::array<double, 4> parse_matrix(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw ConfigError("matrix: expected four comma-separated entries g,d,b,al");
  std::array<double, 4> m{};
  for (std::size_t i = 0; i < 4; ++i) m[i] = parse_double(parts[i], "matrix");
  return m;
}

LatticeParams RunConfig::lattice() const {
  try {
    return LatticeParams(mass, spacing);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

ContactInteraction RunConfig::connection() const {
  FamilySpec spec;
  spec.kind = family.kind;
  if (family.kind == FamilyKind::raw) {
    if (!family.matrix) throw ConfigError("family 'raw' requires a matrix (--matrix g,d,b,al)");
    const auto& m = *family.matrix;
    spec.raw_matrix = RealMatrix2{m[0], m[1], m[2], m[3]};
  } else {
    if (!family.param) throw ConfigError("family '" + std::string(to_string(family.kind)) + "' requires --param");
    spec.param = *family.param;
  }
  try {
    return make_connection(spec, tolerances.construction);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig config_from_json(const json& doc) {
  check_keys(doc, {"family", "lattice", "window", "mode", "scale", "output", "seed", "samples", "points",
                   "strict_missed_bands", "tolerances"},
             "config");
  RunConfig c;
  if (doc.contains("family")) {
    const json& f = doc["family"];
    check_keys(f, {"kind", "param", "param_range", "matrix"}, "family");
    if (f.contains("kind")) c.family.kind = family_from_string(get_string(f["kind"], "family.kind"));
    if (f.contains("param")) c.family.param = get_number(f["param"], "family.param");
    if (f.contains("param_range")) {
      const json& r = f["param_range"];
      check_keys(r, {"lo", "hi", "n"}, "family.param_range");
      if (!r.contains("lo") || !r.contains("hi") || !r.contains("n")) {
        throw ConfigError("family.param_range: requires lo, hi and n");
      }
      c.family.param_range = ParamRange{get_number(r["lo"], "param_range.lo"), get_number(r["hi"], "param_range.hi"),
                                        get_count(r["n"], "param_range.n")};
    }
    if (f.contains("matrix")) {
      const json& m = f["matrix"];
      if (!m.is_array() || m.size() != 4) throw ConfigError("family.matrix: expected [gamma, delta, beta, alpha]");
      std::array<double, 4> entries{};
      for (std::size_t i = 0; i < 4; ++i) entries[i] = get_number(m[i], "family.matrix");
      c.family.matrix = entries;
    }
  }
  if (doc.contains("lattice")) {
    const json& l = doc["lattice"];
    check_keys(l, {"mass", "spacing"}, "lattice");
    if (l.contains("mass")) c.mass = get_number(l["mass"], "lattice.mass");
    if (l.contains("spacing")) c.spacing = get_number(l["spacing"], "lattice.spacing");
  }
  if (doc.contains("window")) {
    const json& w = doc["window"];
    check_keys(w, {"min", "max", "n"}, "window");
    if (w.contains("min")) c.window.min = get_number(w["min"], "window.min");
    if (w.contains("max")) c.window.max = get_number(w["max"], "window.max");
    if (w.contains("n")) c.window.n = get_count(w["n"], "window.n");
  }
  if (doc.contains("mode")) c.mode = parse_axis_mode(get_string(doc["mode"], "mode"));
  if (doc.contains("scale")) c.scale = parse_grid_scale(get_string(doc["scale"], "scale"));
  if (doc.contains("output")) {
    const json& o = doc["output"];
    check_keys(o, {"csv", "svg"}, "output");
    if (o.contains("csv")) c.csv_path = get_string(o["csv"], "output.csv");
    if (o.contains("svg")) c.svg_path = get_string(o["svg"], "output.svg");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("samples")) c.samples = get_count(doc["samples"], "samples");
  if (doc.contains("points")) c.points = get_count(doc["points"], "points");
  if (doc.contains("strict_missed_bands")) {
    if (!doc["strict_missed_bands"].is_boolean()) throw ConfigError("strict_missed_bands: expected a boolean");
    c.strict_missed_bands = doc["strict_missed_bands"].get<bool>();
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    check_keys(t, {"construction", "oracle", "bloch", "biorthogonal", "transmission", "verify"}, "tolerances");
    if (t.contains("construction")) c.tolerances.construction = get_number(t["construction"], "tolerances.construction");
    if (t.contains("oracle")) c.tolerances.oracle = get_number(t["oracle"], "tolerances.oracle");
    if (t.contains("bloch")) c.tolerances.bloch = get_number(t["bloch"], "tolerances.bloch");
    if (t.contains("biorthogonal")) c.tolerances.biorthogonal = get_number(t["biorthogonal"], "tolerances.biorthogonal");
    if (t.contains("transmission")) c.tolerances.transmission = get_number(t["transmission"], "tolerances.transmission");
    if (t.contains("verify")) c.tolerances.verify = get_number(t["verify"], "tolerances.verify");
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json family = {{"kind", std::string(to_string(c.family.kind))}};
  if (c.family.param) family["param"] = *c.family.param;
  if (c.family.param_range) {
    family["param_range"] = {{"lo", c.family.param_range->lo}, {"hi", c.family.param_range->hi},
                             {"n", c.family.param_range->n}};
  }
  if (c.family.matrix) family["matrix"] = *c.family.matrix;

  json window = json::object();
  if (c.window.min) window["min"] = *c.window.min;
  if (c.window.max) window["max"] = *c.window.max;
  if (c.window.n) window["n"] = *c.window.n;

  json output = json::object();
  if (c.csv_path) output["csv"] = *c.csv_path;
  if (c.svg_path) output["svg"] = *c.svg_path;

  json tol = {{"construction", c.tolerances.construction},
              {"oracle", c.tolerances.oracle},
              {"bloch", c.tolerances.bloch},
              {"biorthogonal", c.tolerances.biorthogonal},
              {"transmission", c.tolerances.transmission}};
  if (c.tolerances.verify) tol["verify"] = *c.tolerances.verify;

  return {{"family", family},
          {"lattice", {{"mass", c.mass}, {"spacing", c.spacing}}},
          {"window", window},
          {"mode", to_string(c.mode)},
          {"scale", to_string(c.scale)},
          {"output", output},
          {"seed", c.seed},
          {"samples", c.samples},
          {"points", c.points},
          {"strict_missed_bands", c.strict_missed_bands},
          {"tolerances", tol}};
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return config_from_json(doc);
}

void apply_overrides(RunConfig& c, const CliOverrides& f) {
  if (f.family) c.family.kind = family_from_string(*f.family);
  if (f.param) c.family.param = *f.param;
  if (f.param_range) c.family.param_range = parse_param_range(*f.param_range);
  if (f.matrix) c.family.matrix = parse_matrix(*f.matrix);
  if (f.mass) c.mass = *f.mass;
  if (f.lattice) c.spacing = *f.lattice;
  if (f.window) {
    const auto [lo, hi] = parse_window(*f.window);
    c.window.min = lo;
    c.window.max = hi;
  }
  if (f.grid) c.window.n = *f.grid;
  if (f.mode) c.mode = parse_axis_mode(*f.mode);
  if (f.scale) c.scale = parse_grid_scale(*f.scale);
  if (f.out) c.csv_path = *f.out;
  if (f.svg) c.svg_path = *f.svg;
  if (f.seed) c.seed = *f.seed;
  if (f.samples) c.samples = *f.samples;
  if (f.points) c.points = *f.points;
  if (f.tolerance) c.tolerances.verify = *f.tolerance;
  if (f.strict_missed_bands) c.strict_missed_bands = true;
}

}  // namespace kpb::cli
