#pragma once

// Band edges, Bloch dispersion curves and width/gap profiles for a periodic
// array of one contact interaction.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "kpb/core.hpp"

namespace kpb {

/// Which condition pins a band edge: f = +2, f = -2, or the search window.
enum class EdgeKind { plus_two, minus_two, window };

std::string_view to_string(EdgeKind kind);

struct Band {
  std::size_t index = 0;
  double E_lo = 0.0;
  double E_hi = 0.0;
  EdgeKind edge_lo = EdgeKind::window;
  EdgeKind edge_hi = EdgeKind::window;
  bool open_below = false;  // lower edge lies at or below the window minimum
  bool open_above = false;  // upper edge lies at or above the window maximum

  double width() const { return E_hi - E_lo; }
  double midpoint() const { return 0.5 * (E_lo + E_hi); }
};

/// A band or gap that only showed up between two grid points. It is still
/// resolved and included, but a finer grid is advisable.
struct MissedBandWarning {
  double E_lo = 0.0;
  double E_hi = 0.0;
  std::string message;
};

struct BandSearchResult {
  std::vector<Band> bands;
  std::vector<MissedBandWarning> warnings;
};

inline constexpr double kDefaultWindowMin = -25.0;
inline constexpr double kDefaultWindowMax = 120.0;
inline constexpr std::size_t kDefaultGridPoints = 20000;
/// Relative bisection stopping width for edge energies.
inline constexpr double kEdgeRelativeTolerance = 1e-12;
/// Gaps whose interior never exceeds |f| = 2 + this are treated as touching bands.
inline constexpr double kTouchTolerance = 1e-12;

/// Scans |f(E)| - 2 on a uniform grid over [E_min, E_max] and refines every
/// sign change by bisection. Throws InvalidArgument when E_min >= E_max or
/// grid_n < 2.
BandSearchResult find_band_edges(const ContactInteraction& v, const LatticeParams& lat, double E_min, double E_max,
                                 std::size_t grid_n = kDefaultGridPoints);

struct DispersionPoint {
  double k = 0.0;  // reduced zone, [0, pi/a]
  double E = 0.0;
};

class StaleBandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Chebyshev-clustered samples of k(E) = arccos(f(E)/2)/a across the band.
/// Throws StaleBandError if an interior sample violates the band condition.
std::vector<DispersionPoint> dispersion_curve(const Band& band, const ContactInteraction& v,
                                              const LatticeParams& lat, std::size_t n_points = 101);

/// Widths of consecutive bands and of the gaps between them, on the energy
/// axis and on the signed wavenumber axis (k0 for E >= 0, -kappa below).
/// gaps_*[i] separates bands[i] and bands[i + 1].
struct BandProfile {
  std::vector<Band> bands;
  std::vector<double> widths_E;
  std::vector<double> widths_k0;
  std::vector<double> gaps_E;
  std::vector<double> gaps_k0;
  std::vector<MissedBandWarning> warnings;
};

/// Lowest n_bands bands of the spectrum. Throws InvalidArgument if n_bands < 2.
BandProfile band_width_and_gap_profile(const ContactInteraction& v, const LatticeParams& lat, std::size_t n_bands);

/// An energy at or below kDefaultWindowMin below which the band condition
/// provably never holds.
double spectrum_floor(const ContactInteraction& v, const LatticeParams& lat);

}  // namespace kpb
