#pragma once

// Run configuration for the kpb tool. A single JSON document, overridden by
// command-line flags (flags > file > defaults). Unknown keys are rejected.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "kpb/core.hpp"

namespace kpb::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AxisMode { energy, wavenumber };  // "E" | "k0"
enum class GridScale { linear, log };

struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  friend bool operator==(const ParamRange&, const ParamRange&) = default;
};

struct FamilyConfig {
  FamilyKind kind = FamilyKind::delta;
  std::optional<double> param;
  std::optional<ParamRange> param_range;
  std::optional<std::array<double, 4>> matrix;  // gamma, delta, beta, alpha
  friend bool operator==(const FamilyConfig&, const FamilyConfig&) = default;
};

struct WindowConfig {
  std::optional<double> min;
  std::optional<double> max;
  std::optional<std::size_t> n;
  friend bool operator==(const WindowConfig&, const WindowConfig&) = default;
};

struct ToleranceConfig {
  double construction = kDeterminantTolerance;
  double oracle = kOracleTolerance;
  double bloch = 1e-9;
  double biorthogonal = 1e-12;
  double transmission = 1e-12;
  /// Replaces every upper threshold of `kpb verify` when set.
  std::optional<double> verify;
  friend bool operator==(const ToleranceConfig&, const ToleranceConfig&) = default;
};

struct RunConfig {
  FamilyConfig family;
  double mass = 0.5;
  double spacing = 1.0;
  WindowConfig window;
  AxisMode mode = AxisMode::energy;
  GridScale scale = GridScale::log;
  std::optional<std::string> csv_path;
  std::optional<std::string> svg_path;
  std::uint64_t seed = 20040816;
  std::size_t samples = 1000;
  std::size_t points = 101;
  bool strict_missed_bands = false;
  ToleranceConfig tolerances;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  LatticeParams lattice() const;
  /// Connection matrix for a fixed-parameter run.
  ContactInteraction connection() const;
};

RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const RunConfig& config);
RunConfig load_config_file(const std::string& path);

/// Flag values; unset members leave the config untouched.
struct CliOverrides {
  std::optional<std::string> family;
  std::optional<double> param;
  std::optional<std::string> param_range;
  std::optional<std::string> matrix;
  std::optional<double> mass;
  std::optional<double> lattice;
  std::optional<std::string> window;
  std::optional<std::size_t> grid;
  std::optional<std::string> mode;
  std::optional<std::string> scale;
  std::optional<std::string> out;
  std::optional<std::string> svg;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> points;
  std::optional<double> tolerance;
  bool strict_missed_bands = false;
};

void apply_overrides(RunConfig& config, const CliOverrides& flags);

/// "lo:hi:n"
ParamRange parse_param_range(const std::string& text);
/// "lo:hi"
std::pair<double, double> parse_window(const std::string& text);
/// "g,d,b,al"
std::array<double, 4> parse_matrix(const std::string& text);

AxisMode parse_axis_mode(const std::string& text);
std::string to_string(AxisMode mode);
GridScale parse_grid_scale(const std::string& text);
std::string to_string(GridScale scale);

}  // namespace kpb::cli
