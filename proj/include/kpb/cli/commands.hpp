#pragma once

#include <ostream>
#include <string_view>

#include "kpb/cli/config.hpp"

namespace kpb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitEscalatedWarning = 3;
inline constexpr int kExitResidualFailure = 4;

enum class Command { bands, sweep, dispersion, transmission, verify };

std::string_view to_string(Command command);

/// Band-edge table: band_index,E_lo,E_hi,edge_lo,edge_hi,width_E,width_k0.
int cmd_bands(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Allowed/forbidden raster as CSV, plus an SVG when svg_path is set.
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Reduced-zone curves: band_index,k,E.
int cmd_dispersion(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Single-obstacle probabilities: k0,T2,R2.
int cmd_transmission(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Seeded oracle battery; kExitResidualFailure if any check fails.
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches and maps exceptions onto exit codes.
int run_command(Command command, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace kpb::cli
