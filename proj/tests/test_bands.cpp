#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "kpb/bands.hpp"
#include "kpb/core.hpp"
#include "kpb/oracle.hpp"

using namespace kpb;
using std::numbers::pi;

namespace {

// Brute-force count of maximal allowed runs on a dense uniform grid.
std::size_t dense_run_count(const ContactInteraction& v, const LatticeParams& lat, double lo, double hi,
                            std::size_t n) {
  std::size_t runs = 0;
  bool prev = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    const bool in = band_condition(Energy(e), v, lat);
    if (in && !prev) ++runs;
    prev = in;
  }
  return runs;
}

void check_band_invariants(const BandSearchResult& r, const ContactInteraction& v, const LatticeParams& lat) {
  for (std::size_t i = 0; i < r.bands.size(); ++i) {
    const Band& b = r.bands[i];
    CHECK(b.index == i);
    CHECK(b.E_lo < b.E_hi);
    const double fm = trace_function(Energy(b.midpoint()), v, lat);
    CHECK(std::abs(fm) < 2.0);
    if (b.edge_lo != EdgeKind::window) {
      CHECK(std::abs(std::abs(trace_function(Energy(b.E_lo), v, lat)) - 2.0) < 1e-9);
    }
    if (b.edge_hi != EdgeKind::window) {
      CHECK(std::abs(std::abs(trace_function(Energy(b.E_hi), v, lat)) - 2.0) < 1e-9);
    }
    if (i > 0) CHECK(r.bands[i - 1].E_hi < b.E_lo);
  }
}

}  // namespace

TEST_CASE("find_band_edges: argument validation") {
  const ContactInteraction v;
  const LatticeParams lat;
  CHECK_THROWS_AS(find_band_edges(v, lat, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(find_band_edges(v, lat, 0.0, 1.0, 1), InvalidArgument);
  CHECK_THROWS_AS(find_band_edges(v, lat, NAN, 1.0), InvalidArgument);
}

TEST_CASE("find_band_edges: free lattice is one band spanning the window") {
  const auto r = find_band_edges(ContactInteraction{}, LatticeParams{}, 0.01, 50.0);
  REQUIRE(r.bands.size() == 1);
  CHECK(r.bands[0].E_lo == 0.01);
  CHECK(r.bands[0].E_hi == 50.0);
  CHECK(r.bands[0].edge_lo == EdgeKind::window);
  CHECK(r.bands[0].edge_hi == EdgeKind::window);
  CHECK(r.bands[0].open_below);
  CHECK(r.bands[0].open_above);
  CHECK(r.warnings.empty());
}

TEST_CASE("find_band_edges: delta edges are pinned at (n pi)^2") {
  const LatticeParams lat;
  for (double v : {-3.0, 0.7, 5.0, 40.0}) {
    const auto V = make_connection(FamilySpec::delta(v));
    const auto r = find_band_edges(V, lat, 1.0, 120.0);
    check_band_invariants(r, V, lat);
    for (int n = 1; n * n * pi * pi < 120.0; ++n) {
      const double target = n * n * pi * pi;
      bool found = false;
      for (const Band& b : r.bands) {
        found = found || std::abs(b.E_lo - target) < 1e-9 * target || std::abs(b.E_hi - target) < 1e-9 * target;
      }
      INFO("v=", v, " n=", n);
      CHECK(found);
    }
  }
}

TEST_CASE("find_band_edges: edges bisected to full precision") {
  const LatticeParams lat;
  const auto V = make_connection(FamilySpec::epsilon(1.3));
  const auto r = find_band_edges(V, lat, -25.0, 120.0);
  REQUIRE(r.bands.size() >= 3);
  for (const Band& b : r.bands) {
    for (double e : {b.E_lo, b.E_hi}) {
      const double step = 1e-12 * std::max(1.0, std::abs(e));
      // The edge sits between an allowed and a forbidden energy within the tolerance.
      const bool in = band_condition(Energy(e), V, lat);
      const bool out_below = !band_condition(Energy(e - step), V, lat);
      const bool out_above = !band_condition(Energy(e + step), V, lat);
      if (e == -25.0 || e == 120.0) continue;
      CHECK(in);
      CHECK((out_below || out_above));
    }
  }
}

TEST_CASE("find_band_edges: invariants for random connections (property)") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> md(0.3, 2.0);
  std::uniform_real_distribution<double> ad(0.5, 1.5);
  for (int i = 0; i < 40; ++i) {
    const LatticeParams lat(md(rng), ad(rng));
    const auto V = oracle::random_connection(rng);
    const auto r = find_band_edges(V, lat, -25.0, 120.0, 4000);
    check_band_invariants(r, V, lat);
  }
}

TEST_CASE("find_band_edges: exactly N delta bands below (N pi)^2 (property)") {
  const LatticeParams lat;
  std::mt19937_64 rng(47);
  // For v <= -4 the lowest band lies entirely below zero energy, so the count
  // on [0, (N pi)^2] drops by one; the property holds for v > -4.
  std::uniform_real_distribution<double> vd(-3.99, 30.0);
  for (int i = 0; i < 60; ++i) {
    double v = vd(rng);
    if (v == 0.0) continue;
    const auto V = make_connection(FamilySpec::delta(v));
    for (int n : {1, 3, 5}) {
      const double top = n * n * pi * pi;
      const auto r = find_band_edges(V, lat, 0.0, top, 4000);
      INFO("v=", v, " N=", n);
      CHECK(r.bands.size() == static_cast<std::size_t>(n));
      CHECK(dense_run_count(V, lat, 0.0, top * (1.0 - 1e-9), 200000) == static_cast<std::size_t>(n));
    }
  }
}

TEST_CASE("find_band_edges: rotation p = pi has the free-lattice spectrum") {
  const LatticeParams lat;
  const auto a = find_band_edges(make_connection(FamilySpec::rotation(pi)), lat, 0.01, 100.0);
  const auto b = find_band_edges(ContactInteraction{}, lat, 0.01, 100.0);
  REQUIRE(a.bands.size() == b.bands.size());
  for (std::size_t i = 0; i < a.bands.size(); ++i) {
    CHECK(std::abs(a.bands[i].E_lo - b.bands[i].E_lo) < 1e-9);
    CHECK(std::abs(a.bands[i].E_hi - b.bands[i].E_hi) < 1e-9);
  }
}

TEST_CASE("find_band_edges: rotation spectrum has period pi in p") {
  const LatticeParams lat;
  for (double p : {0.4, 1.1, 2.5}) {
    const auto a = find_band_edges(make_connection(FamilySpec::rotation(p)), lat, -25.0, 120.0);
    const auto b = find_band_edges(make_connection(FamilySpec::rotation(p - pi)), lat, -25.0, 120.0);
    REQUIRE(a.bands.size() == b.bands.size());
    for (std::size_t i = 0; i < a.bands.size(); ++i) {
      CHECK(a.bands[i].E_lo == doctest::Approx(b.bands[i].E_lo).epsilon(1e-9));
      CHECK(a.bands[i].E_hi == doctest::Approx(b.bands[i].E_hi).epsilon(1e-9));
    }
  }
}

TEST_CASE("find_band_edges: doubling the grid never loses a band (property)") {
  std::mt19937_64 rng(53);
  const LatticeParams lat;
  for (int i = 0; i < 20; ++i) {
    const auto V = oracle::random_connection(rng);
    auto coarse = find_band_edges(V, lat, -25.0, 120.0, 500);
    auto fine = find_band_edges(V, lat, -25.0, 120.0, 1000);
    for (const Band& b : coarse.bands) {
      bool kept = false;
      for (const Band& c : fine.bands) kept = kept || (c.E_lo <= b.midpoint() && b.midpoint() <= c.E_hi);
      CHECK(kept);
    }
  }
}

TEST_CASE("find_band_edges: deterministic output") {
  const auto V = make_connection(FamilySpec::hyperbolic(0.8));
  const auto a = find_band_edges(V, LatticeParams{}, -25.0, 120.0);
  const auto b = find_band_edges(V, LatticeParams{}, -25.0, 120.0);
  REQUIRE(a.bands.size() == b.bands.size());
  for (std::size_t i = 0; i < a.bands.size(); ++i) {
    CHECK(a.bands[i].E_lo == b.bands[i].E_lo);
    CHECK(a.bands[i].E_hi == b.bands[i].E_hi);
  }
}

TEST_CASE("find_band_edges: sub-grid band gap is resolved and reported") {
  const LatticeParams lat;
  const auto V = make_connection(FamilySpec::delta(0.5));
  // Two grid points, both in band; the gap just above pi^2 hides between them.
  const auto r = find_band_edges(V, lat, pi * pi - 0.3, (pi + 0.3) * (pi + 0.3), 2);
  CHECK(r.warnings.size() == 1);
  REQUIRE(r.bands.size() == 2);
  CHECK(r.bands[0].E_hi == doctest::Approx(pi * pi).epsilon(1e-12));
  const auto dense = find_band_edges(V, lat, pi * pi - 0.3, (pi + 0.3) * (pi + 0.3), 2000);
  CHECK(dense.warnings.empty());
  REQUIRE(dense.bands.size() == 2);
  CHECK(dense.bands[1].E_lo == doctest::Approx(r.bands[1].E_lo).epsilon(1e-12));
}

TEST_CASE("find_band_edges: point spectrum limit") {
  const LatticeParams lat;
  for (auto spec : {FamilySpec::delta(1e6), FamilySpec::epsilon(1e6)}) {
    const auto r = find_band_edges(make_connection(spec), lat, 1.0, 100.0);
    REQUIRE(r.bands.size() == 3);
    for (std::size_t n = 0; n < 3; ++n) {
      const double target = (n + 1.0) * (n + 1.0) * pi * pi;
      CHECK(r.bands[n].width() < 1e-3);
      CHECK(std::abs(r.bands[n].midpoint() - target) < 1e-3);
    }
  }
}

TEST_CASE("find_band_edges: negative energy bands") {
  const LatticeParams lat;
  const auto eps = find_band_edges(make_connection(FamilySpec::epsilon(-0.5)), lat, -25.0, 50.0);
  REQUIRE_FALSE(eps.bands.empty());
  CHECK(eps.bands[0].E_lo < 0.0);
  const auto del = find_band_edges(make_connection(FamilySpec::delta(-6.0)), lat, -25.0, 50.0);
  REQUIRE_FALSE(del.bands.empty());
  CHECK(del.bands[0].E_hi < 0.0);
  // Positive strengths bind nothing below zero.
  const auto pos = find_band_edges(make_connection(FamilySpec::delta(3.0)), lat, -25.0, 50.0);
  REQUIRE_FALSE(pos.bands.empty());
  CHECK(pos.bands[0].E_lo > 0.0);
}

TEST_CASE("negative band sinks as delta v decreases and as epsilon u rises toward zero") {
  const LatticeParams lat;
  double prev = 0.0;
  for (double v : {-4.0, -6.0, -8.0, -10.0, -12.0}) {
    const auto V = make_connection(FamilySpec::delta(v));
    const auto r = find_band_edges(V, lat, spectrum_floor(V, lat), 0.0);
    REQUIRE_FALSE(r.bands.empty());
    CHECK(r.bands[0].E_lo < prev);
    prev = r.bands[0].E_lo;
  }
  prev = 0.0;
  for (double u : {-2.0, -1.0, -0.5, -0.25, -0.125}) {
    const auto V = make_connection(FamilySpec::epsilon(u));
    const auto r = find_band_edges(V, lat, spectrum_floor(V, lat), 0.0);
    REQUIRE_FALSE(r.bands.empty());
    CHECK(r.bands[0].E_lo < prev);
    prev = r.bands[0].E_lo;
  }
}

TEST_CASE("spectrum_floor lies below every band") {
  std::mt19937_64 rng(59);
  const LatticeParams lat;
  for (int i = 0; i < 30; ++i) {
    const auto V = oracle::random_connection(rng);
    const double floor = spectrum_floor(V, lat);
    CHECK(floor <= kDefaultWindowMin);
    CHECK_FALSE(band_condition(Energy(floor), V, lat));
    const auto r = find_band_edges(V, lat, floor, 50.0, 20000);
    if (!r.bands.empty()) CHECK_FALSE(r.bands[0].open_below);
  }
}

TEST_CASE("dispersion_curve: 2 cos(ka) = f(E) at every point (property)") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> ad(0.5, 2.0);
  for (int i = 0; i < 20; ++i) {
    const LatticeParams lat(0.5, ad(rng));
    const auto V = oracle::random_connection(rng);
    const auto r = find_band_edges(V, lat, -25.0, 120.0, 4000);
    for (const Band& b : r.bands) {
      for (const auto& p : dispersion_curve(b, V, lat)) {
        CHECK(p.k >= 0.0);
        CHECK(p.k <= pi / lat.spacing());
        CHECK(std::abs(2.0 * std::cos(p.k * lat.spacing()) - trace_function(Energy(p.E), V, lat)) < 1e-9);
      }
    }
  }
}

TEST_CASE("dispersion_curve: edge kinds map to k = 0 and k = pi") {
  const LatticeParams lat;
  const auto V = make_connection(FamilySpec::delta(2.0));
  const auto r = find_band_edges(V, lat, 0.0, 50.0);
  REQUIRE(r.bands.size() >= 2);
  const Band& b = r.bands[0];
  const auto pts = dispersion_curve(b, V, lat, 11);
  REQUIRE(pts.size() == 11);
  CHECK(pts.front().E == b.E_lo);
  CHECK(pts.back().E == b.E_hi);
  auto expected_k = [](EdgeKind kind) { return kind == EdgeKind::plus_two ? 0.0 : pi; };
  CHECK(pts.front().k == doctest::Approx(expected_k(b.edge_lo)).epsilon(1e-5));
  CHECK(pts.back().k == doctest::Approx(expected_k(b.edge_hi)).epsilon(1e-5));
  for (std::size_t j = 1; j < pts.size(); ++j) CHECK(pts[j].E > pts[j - 1].E);
}

TEST_CASE("dispersion_curve: free lattice folds E = k0^2 into the reduced zone") {
  const LatticeParams lat;
  Band b;
  b.E_lo = 0.5;
  b.E_hi = 60.0;
  for (const auto& p : dispersion_curve(b, ContactInteraction{}, lat, 50)) {
    const double k0 = std::sqrt(p.E);
    const double folded = std::abs(std::remainder(k0, 2.0 * pi));
    CHECK(p.k == doctest::Approx(folded).epsilon(1e-7));
  }
}

TEST_CASE("dispersion_curve: stale band is rejected") {
  const LatticeParams lat;
  const auto V = make_connection(FamilySpec::delta(5.0));
  Band stale;
  stale.E_lo = 1.0;
  stale.E_hi = 60.0;
  CHECK_THROWS_AS(dispersion_curve(stale, V, lat), StaleBandError);
  CHECK_THROWS_AS(dispersion_curve(stale, V, lat, 1), InvalidArgument);
}

TEST_CASE("band profile: delta gaps and generic widths shrink in k0") {
  const LatticeParams lat;
  const auto delta = band_width_and_gap_profile(make_connection(FamilySpec::delta(10.0)), lat, 12);
  REQUIRE(delta.bands.size() == 12);
  REQUIRE(delta.gaps_k0.size() == 11);
  for (std::size_t i = 3; i < delta.gaps_k0.size(); ++i) CHECK(delta.gaps_k0[i] < delta.gaps_k0[i - 1]);
  for (auto spec : {FamilySpec::epsilon(1.0), FamilySpec::rotation(1.0), FamilySpec::hyperbolic(1.0)}) {
    const auto p = band_width_and_gap_profile(make_connection(spec), lat, 12);
    REQUIRE(p.widths_k0.size() == 12);
    for (std::size_t i = 3; i < p.widths_k0.size(); ++i) CHECK(p.widths_k0[i] < p.widths_k0[i - 1]);
  }
}

TEST_CASE("band profile: widths and gaps are consistent with the bands") {
  const LatticeParams lat;
  const auto p = band_width_and_gap_profile(make_connection(FamilySpec::epsilon(-0.5)), lat, 5);
  REQUIRE(p.bands.size() == 5);
  CHECK(p.bands[0].E_lo < 0.0);
  CHECK(p.widths_k0[0] == doctest::Approx(signed_wavenumber(p.bands[0].E_hi, lat) -
                                          signed_wavenumber(p.bands[0].E_lo, lat)));
  for (std::size_t i = 0; i + 1 < p.bands.size(); ++i) {
    CHECK(p.gaps_E[i] == doctest::Approx(p.bands[i + 1].E_lo - p.bands[i].E_hi));
    CHECK(p.gaps_E[i] > 0.0);
    CHECK(p.gaps_k0[i] > 0.0);
  }
  CHECK_THROWS_AS(band_width_and_gap_profile(ContactInteraction{}, lat, 1), InvalidArgument);
}

TEST_CASE("band profile: free lattice has a single band and no gaps") {
  const auto p = band_width_and_gap_profile(ContactInteraction{}, LatticeParams{}, 4);
  CHECK(p.bands.size() == 1);
  CHECK(p.gaps_E.empty());
  CHECK(p.gaps_k0.empty());
}
