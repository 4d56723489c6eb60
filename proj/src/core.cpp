#include "kpb/core.hpp"

#include <cmath>
#include <numbers>

namespace kpb {

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw InvalidArgument(std::string(what) + " must be finite");
  }
}

// Exact sin/cos at multiples of pi/2 so that rotation(pi) is exactly -I.
void exact_sincos(double p, double& s, double& c) {
  constexpr double pi = std::numbers::pi;
  if (p == 0.0) {
    s = 0.0, c = 1.0;
  } else if (p == pi || p == -pi) {
    s = 0.0, c = -1.0;
  } else if (p == pi / 2) {
    s = 1.0, c = 0.0;
  } else if (p == -pi / 2) {
    s = -1.0, c = 0.0;
  } else {
    s = std::sin(p), c = std::cos(p);
  }
}

}  // namespace

LatticeParams::LatticeParams(double mass, double spacing) : mass_(mass), spacing_(spacing) {
  if (!(std::isfinite(mass) && mass > 0.0)) {
    throw InvalidArgument("lattice: mass must be positive and finite");
  }
  if (!(std::isfinite(spacing) && spacing > 0.0)) {
    throw InvalidArgument("lattice: spacing must be positive and finite");
  }
}

ContactInteraction ContactInteraction::from_entries(double gamma, double delta, double beta, double alpha,
                                                    double tolerance) {
  require_finite(gamma, "gamma");
  require_finite(delta, "delta");
  require_finite(beta, "beta");
  require_finite(alpha, "alpha");
  // Kahan's compensated 2x2 determinant.
  const double w = beta * delta;
  const double det = std::fma(alpha, gamma, -w) + std::fma(-beta, delta, w);
  if (!(std::abs(det - 1.0) <= tolerance)) {
    throw InvalidArgument("connection matrix must have unit determinant (det = " + std::to_string(det) + ")");
  }
  return ContactInteraction(gamma, delta, beta, alpha);
}

ContactInteraction ContactInteraction::from_matrix(const RealMatrix2& m, double tolerance) {
  return from_entries(m.m00, m.m01, m.m10, m.m11, tolerance);
}

ContactInteraction ContactInteraction::inverse() const {
  // [[g, d], [b, a]]^-1 = [[a, -d], [-b, g]] when a*g - b*d = 1.
  return ContactInteraction(alpha_, -delta_, -beta_, gamma_);
}

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::delta: return "delta";
    case FamilyKind::epsilon: return "epsilon";
    case FamilyKind::rotation: return "rotation";
    case FamilyKind::hyperbolic: return "hyperbolic";
    case FamilyKind::raw: return "raw";
  }
  return "unknown";
}

FamilyKind parse_family_kind(std::string_view name) {
  for (auto kind : {FamilyKind::delta, FamilyKind::epsilon, FamilyKind::rotation, FamilyKind::hyperbolic,
                    FamilyKind::raw}) {
    if (name == to_string(kind)) return kind;
  }
  throw InvalidArgument("unknown family '" + std::string(name) + "'");
}

ContactInteraction make_connection(const FamilySpec& spec, double tolerance) {
  if (spec.kind == FamilyKind::raw) {
    if (!spec.raw_matrix) throw InvalidArgument("raw family requires a matrix");
    return ContactInteraction::from_matrix(*spec.raw_matrix, tolerance);
  }
  const double p = spec.param;
  require_finite(p, "family parameter");
  switch (spec.kind) {
    case FamilyKind::delta:
      return ContactInteraction(1.0, 0.0, p, 1.0);
    case FamilyKind::epsilon:
      return ContactInteraction(1.0, p, 0.0, 1.0);
    case FamilyKind::rotation: {
      if (!(p > -std::numbers::pi && p <= std::numbers::pi)) {
        throw InvalidArgument("rotation parameter must lie in (-pi, pi]");
      }
      double s = 0.0;
      double c = 1.0;
      exact_sincos(p, s, c);
      return ContactInteraction(c, -s, s, c);
    }
    case FamilyKind::hyperbolic:
      // Unit determinant holds analytically; rounding of cosh^2 - sinh^2 grows like e^{2|p|} ulp.
      return ContactInteraction(std::cosh(p), std::sinh(p), std::sinh(p), std::cosh(p));
    case FamilyKind::raw:
      break;
  }
  throw InvalidArgument("unsupported family");
}

Energy::Energy(double value) : value_(value) { require_finite(value, "energy"); }

std::optional<double> Energy::k0(const LatticeParams& lat) const {
  if (value_ > 0.0) return std::sqrt(2.0 * lat.mass() * value_);
  return std::nullopt;
}

std::optional<double> Energy::kappa(const LatticeParams& lat) const {
  if (value_ < 0.0) return std::sqrt(-2.0 * lat.mass() * value_);
  return std::nullopt;
}

double signed_wavenumber(double energy, const LatticeParams& lat) {
  const double k = std::sqrt(2.0 * lat.mass() * std::abs(energy));
  return energy < 0.0 ? -k : k;
}

double energy_from_signed_wavenumber(double k0, const LatticeParams& lat) {
  const double e = k0 * k0 / (2.0 * lat.mass());
  return k0 < 0.0 ? -e : e;
}

namespace detail {

double cos_like(double t) {
  if (std::abs(t) < kSeriesThreshold * kSeriesThreshold) {
    return 1.0 + t * (-1.0 / 2.0 + t * (1.0 / 24.0 + t * (-1.0 / 720.0)));
  }
  if (t > 0.0) return std::cos(std::sqrt(t));
  return std::cosh(std::sqrt(-t));
}

double sinc_like(double t) {
  if (std::abs(t) < kSeriesThreshold * kSeriesThreshold) {
    return 1.0 + t * (-1.0 / 6.0 + t * (1.0 / 120.0 + t * (-1.0 / 5040.0)));
  }
  if (t > 0.0) {
    const double r = std::sqrt(t);
    return std::sin(r) / r;
  }
  const double r = std::sqrt(-t);
  return std::sinh(r) / r;
}

}  // namespace detail

RealMatrix2 propagator(double x, Energy energy, const LatticeParams& lat) {
  require_finite(x, "displacement");
  const double m = lat.mass();
  const double e = energy.value();
  // (k0 x)^2, negative below zero energy.
  const double t = 2.0 * m * e * x * x;
  const double c = detail::cos_like(t);
  const double xs = x * detail::sinc_like(t);  // sin(k0 x)/k0
  return {c, 2.0 * m * xs, -e * xs, c};
}

double trace_function(Energy energy, const ContactInteraction& v, const LatticeParams& lat) {
  const double m = lat.mass();
  const double a = lat.spacing();
  const double e = energy.value();
  const double t = 2.0 * m * e * a * a;
  const double c = detail::cos_like(t);
  const double as = a * detail::sinc_like(t);
  // k0^2 delta / 2m = E delta.
  return (v.alpha() + v.gamma()) * c + as * (2.0 * m * v.beta() - e * v.delta());
}

bool band_condition(Energy energy, const ContactInteraction& v, const LatticeParams& lat) {
  return std::abs(trace_function(energy, v, lat)) <= 2.0;
}

}  // namespace kpb
