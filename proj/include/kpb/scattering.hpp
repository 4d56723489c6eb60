#pragma once

// Transmission and reflection probabilities for a single contact interaction
// hit by a plane wave from the left.

#include <span>
#include <vector>

#include "kpb/core.hpp"

namespace kpb {

struct ScatteringResult {
  double T2 = 1.0;  // transmission probability
  double R2 = 0.0;  // reflection probability, always 1 - T2
  double k0 = 0.0;
};

/// T2 = 4 / (alpha^2 + gamma^2 + 2 + delta^2 k0^2/4m^2 + beta^2 4m^2/k0^2).
/// Throws InvalidArgument unless k0 is finite and positive.
ScatteringResult transmission_probability(const ContactInteraction& v, double k0, const LatticeParams& lat);

/// Evaluates transmission_probability along an ascending list of positive k0.
std::vector<ScatteringResult> limit_profile(const ContactInteraction& v, const LatticeParams& lat,
                                            std::span<const double> k0_list);

}  // namespace kpb
