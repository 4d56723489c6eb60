#include "kpb/bands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace kpb {

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::plus_two: return "+2";
    case EdgeKind::minus_two: return "-2";
    case EdgeKind::window: return "window";
  }
  return "unknown";
}

namespace {

enum class Zone { above, inside, below };  // f > 2, |f| <= 2, f < -2

Zone zone_of(double f) {
  if (f > 2.0) return Zone::above;
  if (f < -2.0) return Zone::below;
  return Zone::inside;
}

struct Edge {
  double E;
  EdgeKind kind;
  bool entering;  // moving up in energy, the band starts here
};

class Scanner {
 public:
  Scanner(const ContactInteraction& v, const LatticeParams& lat) : v_(v), lat_(lat) {}

  double f(double e) const { return trace_function(Energy(e), v_, lat_); }

  // Bisect to full double precision between points of differing zone
  // membership; returns the endpoint on the in-band side.
  Edge refine(double lo, double hi) const {
    const bool lo_in = zone_of(f(lo)) == Zone::inside;
    for (;;) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const bool mid_in = zone_of(f(mid)) == Zone::inside;
      (mid_in == lo_in ? lo : hi) = mid;
    }
    const double e = lo_in ? lo : hi;
    return {e, f(e) >= 0.0 ? EdgeKind::plus_two : EdgeKind::minus_two, !lo_in};
  }

  // f crosses from above 2 to below -2 (or back) inside [lo, hi]; find a point
  // where |f| <= 2 by bisecting on the sign of f.
  double inside_point(double lo, double hi) const {
    const bool lo_positive = f(lo) > 0.0;
    for (;;) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (zone_of(fm) == Zone::inside || mid <= lo || mid >= hi) return mid;
      ((fm > 0.0) == lo_positive ? lo : hi) = mid;
    }
  }

  // Golden-section search for the extremum of |f| on [lo, hi].
  double extremum(double lo, double hi, bool maximize) const {
    constexpr double inv_phi = 0.6180339887498949;
    auto score = [&](double e) { return maximize ? -std::abs(f(e)) : std::abs(f(e)); };
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double s1 = score(x1);
    double s2 = score(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
      if (s1 < s2) {
        hi = x2, x2 = x1, s2 = s1;
        x1 = hi - inv_phi * (hi - lo);
        s1 = score(x1);
      } else {
        lo = x1, x1 = x2, s1 = s2;
        x2 = lo + inv_phi * (hi - lo);
        s2 = score(x2);
      }
    }
    return s1 < s2 ? x1 : x2;
  }

 private:
  const ContactInteraction& v_;
  const LatticeParams& lat_;
};

bool sliver(const Band& b) {
  const bool truncated = b.open_below || b.open_above;
  const double scale = std::max({1.0, std::abs(b.E_lo), std::abs(b.E_hi)});
  return truncated && b.width() <= kEdgeRelativeTolerance * scale;
}

}  // namespace

BandSearchResult find_band_edges(const ContactInteraction& v, const LatticeParams& lat, double E_min, double E_max,
                                 std::size_t grid_n) {
  if (!(std::isfinite(E_min) && std::isfinite(E_max) && E_min < E_max)) {
    throw InvalidArgument("find_band_edges: need finite E_min < E_max");
  }
  if (grid_n < 2) throw InvalidArgument("find_band_edges: grid_n must be at least 2");

  const Scanner scan(v, lat);
  std::vector<double> grid(grid_n);
  std::vector<double> fv(grid_n);
  for (std::size_t i = 0; i < grid_n; ++i) {
    grid[i] = i + 1 == grid_n ? E_max : E_min + (E_max - E_min) * static_cast<double>(i) / (grid_n - 1);
    fv[i] = scan.f(grid[i]);
  }

  BandSearchResult result;

  // Sub-grid features: cells whose endpoints share a zone but which hide a
  // band (both outside) or a gap (both inside).
  std::map<std::size_t, double> features;
  auto cell_of = [&](double e) {
    auto it = std::upper_bound(grid.begin(), grid.end(), e);
    const auto idx = static_cast<std::size_t>(std::distance(grid.begin(), it));
    return std::min(idx == 0 ? 0 : idx - 1, grid_n - 2);
  };
  auto hides_feature = [&](std::size_t cell, double e) {
    const Zone ends = zone_of(fv[cell]);
    const Zone probe = zone_of(scan.f(e));
    if (ends == Zone::inside) return probe != Zone::inside && std::abs(scan.f(e)) > 2.0 + kTouchTolerance;
    return probe == Zone::inside;
  };
  for (std::size_t i = 0; i + 1 < grid_n; ++i) {
    if (zone_of(fv[i]) != zone_of(fv[i + 1])) continue;
    const double mid = 0.5 * (grid[i] + grid[i + 1]);
    if (hides_feature(i, mid)) features.emplace(i, mid);
  }
  for (std::size_t i = 1; i + 1 < grid_n; ++i) {
    const Zone z = zone_of(fv[i]);
    if (z != zone_of(fv[i - 1]) || z != zone_of(fv[i + 1])) continue;
    const double a0 = std::abs(fv[i - 1]);
    const double a1 = std::abs(fv[i]);
    const double a2 = std::abs(fv[i + 1]);
    const bool local_min = z != Zone::inside && a1 <= a0 && a1 <= a2;
    const bool local_max = z == Zone::inside && a1 >= a0 && a1 >= a2;
    if (!local_min && !local_max) continue;
    const double e = scan.extremum(grid[i - 1], grid[i + 1], local_max);
    const std::size_t cell = cell_of(e);
    if (zone_of(fv[cell]) != zone_of(fv[cell + 1]) || features.count(cell)) continue;
    if (e <= grid[cell] || e >= grid[cell + 1]) continue;
    if (hides_feature(cell, e)) features.emplace(cell, e);
  }

  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < grid_n; ++i) {
    const Zone za = zone_of(fv[i]);
    const Zone zb = zone_of(fv[i + 1]);
    const double lo = grid[i];
    const double hi = grid[i + 1];
    if (za != zb) {
      if (za == Zone::inside || zb == Zone::inside) {
        edges.push_back(scan.refine(lo, hi));
      } else {
        const double inside = scan.inside_point(lo, hi);
        edges.push_back(scan.refine(lo, inside));
        edges.push_back(scan.refine(inside, hi));
      }
    } else if (auto it = features.find(i); it != features.end()) {
      const double e = it->second;
      edges.push_back(scan.refine(lo, e));
      edges.push_back(scan.refine(e, hi));
      result.warnings.push_back(
          {lo, hi, za == Zone::inside ? "gap resolved only by sub-grid probing; increase grid_n"
                                      : "band resolved only by sub-grid probing; increase grid_n"});
    }
  }

  std::vector<Band> raw;
  bool in_band = zone_of(fv.front()) == Zone::inside;
  Band current;
  if (in_band) {
    current.E_lo = E_min;
    current.edge_lo = EdgeKind::window;
    current.open_below = true;
  }
  for (const Edge& edge : edges) {
    if (edge.entering && !in_band) {
      current = Band{};
      current.E_lo = edge.E;
      current.edge_lo = edge.kind;
      in_band = true;
    } else if (!edge.entering && in_band) {
      current.E_hi = edge.E;
      current.edge_hi = edge.kind;
      raw.push_back(current);
      in_band = false;
    }
  }
  if (in_band) {
    current.E_hi = E_max;
    current.edge_hi = EdgeKind::window;
    current.open_above = true;
    raw.push_back(current);
  }

  // Merge bands separated only by a touching point (|f| reaches 2 without
  // exceeding it, e.g. the free spectrum at k0 a = n pi).
  std::vector<Band> merged;
  for (const Band& b : raw) {
    if (!merged.empty()) {
      Band& prev = merged.back();
      const double gap = b.E_lo - prev.E_hi;
      const double scale = std::max({1.0, std::abs(prev.E_hi), std::abs(b.E_lo)});
      const double mid = 0.5 * (prev.E_hi + b.E_lo);
      if (gap <= 1e-6 * scale && std::abs(scan.f(mid)) <= 2.0 + kTouchTolerance) {
        prev.E_hi = b.E_hi;
        prev.edge_hi = b.edge_hi;
        prev.open_above = b.open_above;
        continue;
      }
    }
    merged.push_back(b);
  }

  for (const Band& b : merged) {
    if (b.E_hi > b.E_lo && !sliver(b)) result.bands.push_back(b);
  }
  for (std::size_t i = 0; i < result.bands.size(); ++i) result.bands[i].index = i;
  return result;
}

std::vector<DispersionPoint> dispersion_curve(const Band& band, const ContactInteraction& v,
                                              const LatticeParams& lat, std::size_t n_points) {
  if (n_points < 2) throw InvalidArgument("dispersion_curve: n_points must be at least 2");
  if (!(band.E_hi > band.E_lo)) throw InvalidArgument("dispersion_curve: empty band");
  const double a = lat.spacing();
  const double mid = band.midpoint();
  const double half = 0.5 * band.width();

  std::vector<DispersionPoint> out;
  out.reserve(n_points);
  for (std::size_t j = 0; j < n_points; ++j) {
    const bool first = j == 0;
    const bool last = j + 1 == n_points;
    double e = mid - half * std::cos(std::numbers::pi * static_cast<double>(j) / (n_points - 1));
    if (first) e = band.E_lo;
    if (last) e = band.E_hi;
    double c = trace_function(Energy(e), v, lat) / 2.0;
    if (std::abs(c) > 1.0) {
      if (!first && !last && std::abs(c) - 1.0 > kEdgeRelativeTolerance) {
        throw StaleBandError("dispersion_curve: band condition violated at E = " + std::to_string(e));
      }
      c = std::clamp(c, -1.0, 1.0);
    }
    out.push_back({std::acos(c) / a, e});
  }
  return out;
}

double spectrum_floor(const ContactInteraction& v, const LatticeParams& lat) {
  // Below zero, f = A cosh(ka) + sinh(ka) (B k + C / k) with k = kappa,
  // A = alpha + gamma, B = delta / 2m, C = 2m beta. The lower bounds on |f|
  // used here increase with kappa once positive, so the first kappa where
  // they exceed 2 bounds the spectrum.
  const double m = lat.mass();
  const double a = lat.spacing();
  const double A = std::abs(v.alpha() + v.gamma());
  const double B = std::abs(v.delta()) / (2.0 * m);
  const double C = std::abs(2.0 * m * v.beta());
  auto bound = [&](double k) {
    const double x = k * a;
    if (B > 0.0) return std::sinh(x) * (B * k - A / std::tanh(x) - C / k);
    return std::cosh(x) * (A - C * std::tanh(x) / k);
  };
  double k = std::max(1.0 / a, std::sqrt(-2.0 * m * kDefaultWindowMin));
  while (!(bound(k) > 2.0) && std::isfinite(k)) k *= 2.0;
  return -k * k / (2.0 * m);
}

BandProfile band_width_and_gap_profile(const ContactInteraction& v, const LatticeParams& lat, std::size_t n_bands) {
  if (n_bands < 2) throw InvalidArgument("band_width_and_gap_profile: n_bands must be at least 2");
  const double floor = spectrum_floor(v, lat);
  // Bands are at most one per pi/a of k0, plus up to two below zero energy.
  const double k0_top = static_cast<double>(n_bands + 3) * std::numbers::pi / lat.spacing();
  const double top = energy_from_signed_wavenumber(k0_top, lat);
  constexpr double default_spacing = (kDefaultWindowMax - kDefaultWindowMin) / (kDefaultGridPoints - 1);
  const auto grid_n = std::max(kDefaultGridPoints, static_cast<std::size_t>(std::ceil(top / default_spacing)) + 1);

  // Negative and positive energies are scanned separately so that a deep
  // floor does not coarsen the grid where the bands are narrow.
  BandSearchResult below = find_band_edges(v, lat, floor, 0.0, kDefaultGridPoints);
  BandSearchResult above = find_band_edges(v, lat, 0.0, top, grid_n);
  std::vector<Band> all = std::move(below.bands);
  if (!all.empty() && !above.bands.empty() && all.back().open_above && above.bands.front().open_below) {
    all.back().E_hi = above.bands.front().E_hi;
    all.back().edge_hi = above.bands.front().edge_hi;
    all.back().open_above = above.bands.front().open_above;
    above.bands.erase(above.bands.begin());
  }
  all.insert(all.end(), above.bands.begin(), above.bands.end());

  BandProfile profile;
  profile.warnings = std::move(below.warnings);
  profile.warnings.insert(profile.warnings.end(), above.warnings.begin(), above.warnings.end());
  const std::size_t n = std::min(n_bands, all.size());
  profile.bands.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    Band& b = profile.bands[i];
    b.index = i;
    profile.widths_E.push_back(b.width());
    profile.widths_k0.push_back(signed_wavenumber(b.E_hi, lat) - signed_wavenumber(b.E_lo, lat));
    if (i + 1 < n) {
      const Band& next = profile.bands[i + 1];
      profile.gaps_E.push_back(next.E_lo - b.E_hi);
      profile.gaps_k0.push_back(signed_wavenumber(next.E_lo, lat) - signed_wavenumber(b.E_hi, lat));
    }
  }
  return profile;
}

}  // namespace kpb
