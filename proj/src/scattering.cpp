#include "kpb/scattering.hpp"

#include <cmath>

namespace kpb {

ScatteringResult transmission_probability(const ContactInteraction& v, double k0, const LatticeParams& lat) {
  if (!(std::isfinite(k0) && k0 > 0.0)) {
    throw InvalidArgument("transmission: k0 must be positive and finite");
  }
  const double two_m = 2.0 * lat.mass();
  const double high = v.delta() * k0 / two_m;
  const double low = v.beta() * two_m / k0;
  const double denom = v.alpha() * v.alpha() + v.gamma() * v.gamma() + 2.0 + high * high + low * low;
  ScatteringResult r;
  r.k0 = k0;
  r.T2 = 4.0 / denom;
  r.R2 = 1.0 - r.T2;
  return r;
}

std::vector<ScatteringResult> limit_profile(const ContactInteraction& v, const LatticeParams& lat,
                                            std::span<const double> k0_list) {
  for (std::size_t i = 1; i < k0_list.size(); ++i) {
    if (!(k0_list[i] >= k0_list[i - 1])) {
      throw InvalidArgument("limit_profile: k0 list must be sorted ascending");
    }
  }
  std::vector<ScatteringResult> out;
  out.reserve(k0_list.size());
  for (double k0 : k0_list) {
    out.push_back(transmission_probability(v, k0, lat));
  }
  return out;
}

}  // namespace kpb
