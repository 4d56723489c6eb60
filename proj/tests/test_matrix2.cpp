#include <doctest.h>

#include <random>

#include "kpb/matrix2.hpp"

using namespace kpb;

TEST_CASE("matrix2: determinant, trace and inverse") {
  const RealMatrix2 m{2.0, 3.0, 1.0, 4.0};
  CHECK(m.det() == 5.0);
  CHECK(m.trace() == 6.0);
  const RealMatrix2 p = m * m.inverse();
  CHECK(max_abs_diff(p, RealMatrix2::identity()) < 1e-15);
}

TEST_CASE("matrix2: complex adjoint conjugates and transposes") {
  using c = std::complex<double>;
  const ComplexMatrix2 m{c(1, 2), c(3, -1), c(0, 5), c(4, 0)};
  const ComplexMatrix2 a = m.adjoint();
  CHECK(a.m00 == c(1, -2));
  CHECK(a.m01 == c(0, -5));
  CHECK(a.m10 == c(3, 1));
  CHECK(a.m11 == c(4, 0));
  const ComplexVector2 u{c(1, 1), c(2, -1)};
  CHECK(dot_adjoint(u, u) == c(7, 0));
}

TEST_CASE("matrix2: multiplication is associative to rounding") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  auto rnd = [&] { return RealMatrix2{d(rng), d(rng), d(rng), d(rng)}; };
  for (int i = 0; i < 200; ++i) {
    const RealMatrix2 a = rnd(), b = rnd(), c = rnd();
    CHECK(max_abs_diff((a * b) * c, a * (b * c)) < 1e-12);
    CHECK(std::abs((a * b).det() - a.det() * b.det()) < 1e-11);
  }
}
