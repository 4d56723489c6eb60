#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "kpb/core.hpp"
#include "kpb/oracle.hpp"
#include "kpb/scattering.hpp"

using namespace kpb;

TEST_CASE("transmission: worked examples") {
  const LatticeParams lat;
  CHECK(transmission_probability(ContactInteraction{}, 3.7, lat).T2 == 1.0);
  CHECK(transmission_probability(make_connection(FamilySpec::delta(2.0)), 1.0, lat).T2 == doctest::Approx(0.5));
  const auto rot = transmission_probability(make_connection(FamilySpec::rotation(std::numbers::pi / 2)), 1.0, lat);
  CHECK(rot.T2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(transmission_probability(make_connection(FamilySpec::epsilon(4.0)), 1.0, lat).T2 == doctest::Approx(0.2));
  CHECK(transmission_probability(make_connection(FamilySpec::delta(1.0)), 1000.0, lat).T2 ==
        doctest::Approx(1.0 / (1.0 + 0.25e-6)).epsilon(1e-15));
  CHECK(transmission_probability(make_connection(FamilySpec::hyperbolic(1.0)), 1000.0, lat).T2 < 1e-4);
}

TEST_CASE("transmission: k0 must be positive and finite") {
  const ContactInteraction v;
  const LatticeParams lat;
  CHECK_THROWS_AS(transmission_probability(v, 0.0, lat), InvalidArgument);
  CHECK_THROWS_AS(transmission_probability(v, -1.0, lat), InvalidArgument);
  CHECK_THROWS_AS(transmission_probability(v, INFINITY, lat), InvalidArgument);
  const std::vector<double> unsorted{1.0, 0.5};
  CHECK_THROWS_AS(limit_profile(v, lat, unsorted), InvalidArgument);
  const std::vector<double> with_zero{0.0, 0.5};
  CHECK_THROWS_AS(limit_profile(v, lat, with_zero), InvalidArgument);
}

TEST_CASE("transmission: unitarity and range (property)") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> lk(-4.0, 4.0);
  std::uniform_real_distribution<double> md(0.1, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const LatticeParams lat(md(rng), 1.0);
    const auto r = transmission_probability(oracle::random_connection(rng, 3.0), std::pow(10.0, lk(rng)), lat);
    CHECK(r.T2 + r.R2 == 1.0);
    CHECK(r.T2 >= 0.0);
    CHECK(r.T2 <= 1.0);
  }
}

TEST_CASE("transmission: delta and epsilon closed forms (property)") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> sd(-50.0, 50.0);
  std::uniform_real_distribution<double> lk(-3.0, 3.0);
  std::uniform_real_distribution<double> md(0.1, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const LatticeParams lat(md(rng), 1.0);
    const double m = lat.mass();
    const double s = sd(rng);
    const double k0 = std::pow(10.0, lk(rng));
    const double t_delta = 1.0 / (1.0 + s * s * m * m / (k0 * k0));
    const double t_eps = 1.0 / (1.0 + s * s * k0 * k0 / (16.0 * m * m));
    CHECK(std::abs(transmission_probability(make_connection(FamilySpec::delta(s)), k0, lat).T2 - t_delta) < 1e-12);
    CHECK(std::abs(transmission_probability(make_connection(FamilySpec::epsilon(s)), k0, lat).T2 - t_eps) < 1e-12);
  }
}

TEST_CASE("transmission: generic decay bound 16 m^2 / (delta^2 k0^2)") {
  std::mt19937_64 rng(73);
  const LatticeParams lat;
  const double m = lat.mass();
  for (int i = 0; i < 200; ++i) {
    const auto v = oracle::random_connection(rng);
    if (v.delta() == 0.0) continue;
    const double c = 16.0 * m * m / (v.delta() * v.delta());
    for (double k0 : {1e2, 1e3, 1e4}) {
      CHECK(transmission_probability(v, k0, lat).T2 <= c / (k0 * k0) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("limit_profile: delta transmits at high energy, epsilon at low energy, generic reflects at both") {
  const LatticeParams lat;
  const std::vector<double> high{1e2, 1e3, 1e4, 1e5};
  const std::vector<double> low{1e-5, 1e-4, 1e-3, 1e-2};
  const auto d = limit_profile(make_connection(FamilySpec::delta(3.0)), lat, high);
  const auto e = limit_profile(make_connection(FamilySpec::epsilon(3.0)), lat, low);
  for (std::size_t i = 1; i < d.size(); ++i) {
    CHECK(d[i].T2 > d[i - 1].T2);
    CHECK(e[i].T2 < e[i - 1].T2);  // ascending in k0 means moving away from the limit
  }
  CHECK(d.back().T2 > 1.0 - 1e-9);
  CHECK(e.front().T2 > 1.0 - 1e-9);
  const auto h = make_connection(FamilySpec::hyperbolic(1.0));
  CHECK(limit_profile(h, lat, high).back().T2 < 1e-9);
  CHECK(limit_profile(h, lat, low).front().T2 < 1e-9);
}
