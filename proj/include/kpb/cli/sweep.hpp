#pragma once

// Allowed/forbidden raster over (family parameter) x (energy or k0).

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "kpb/cli/config.hpp"
#include "kpb/core.hpp"

namespace kpb::cli {

inline constexpr std::size_t kDefaultSweepParams = 601;
inline constexpr std::size_t kDefaultSweepAxis = 1201;

struct SweepGrid {
  FamilyKind family = FamilyKind::delta;
  AxisMode mode = AxisMode::energy;
  std::vector<double> param_axis;
  std::vector<double> axis_values;  // E or signed k0
  std::vector<double> f_half;       // row-major: param index, then axis index
  std::vector<std::uint8_t> allowed;

  std::size_t index(std::size_t i, std::size_t j) const { return i * axis_values.size() + j; }
  bool cell(std::size_t i, std::size_t j) const { return allowed[index(i, j)] != 0; }
};

/// n evenly spaced points over [lo, hi] (both ends included).
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Default parameter axis of a family: delta [-15, 15], epsilon and
/// hyperbolic [-3, 3], rotation the half-open (-pi, pi] with pi included.
std::vector<double> default_param_axis(FamilyKind kind, std::size_t n);

/// Throws ConfigError for raw families, non-increasing axes or rotation
/// parameters outside (-pi, pi]. Rows are computed in parallel; the result
/// does not depend on the number of workers.
SweepGrid compute_sweep(FamilyKind kind, std::span<const double> params, std::span<const double> axis, AxisMode mode,
                        const LatticeParams& lat, unsigned workers = 0);

/// Columns param,axis_value,f_half,allowed.
void write_sweep_csv(const SweepGrid& grid, std::ostream& out);

/// Standalone monochrome SVG; one unit per grid cell, allowed cells filled.
void write_sweep_svg(const SweepGrid& grid, std::ostream& out);

}  // namespace kpb::cli
