#pragma once

// Generalized Kronig-Penney core: lattice parameters, time-reversal
// symmetric contact interactions (SL(2,R) connection matrices), the
// field-free propagator and the trace function whose magnitude decides
// whether an energy lies in a band.
//
// Units: hbar = 1. The state vector is (phi, phi' / 2m); a connection matrix
// V = [[gamma, delta], [beta, alpha]] maps it across one obstacle.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "kpb/matrix2.hpp"

namespace kpb {

/// |det V - 1| allowed when constructing a connection matrix.
inline constexpr double kDeterminantTolerance = 1e-12;
/// Agreement required between closed forms and the matrix-exponential oracle.
inline constexpr double kOracleTolerance = 1e-10;
/// Below this |k0 x| (or |kappa x|) the propagator switches to Taylor series.
inline constexpr double kSeriesThreshold = 1e-4;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LatticeParams {
 public:
  /// Defaults m = 1/2, a = 1 make E = k0^2.
  LatticeParams() = default;
  LatticeParams(double mass, double spacing);

  double mass() const { return mass_; }
  double spacing() const { return spacing_; }

  friend bool operator==(const LatticeParams&, const LatticeParams&) = default;

 private:
  double mass_ = 0.5;
  double spacing_ = 1.0;
};

struct FamilySpec;

class ContactInteraction {
 public:
  /// Identity connection (no obstacle).
  ContactInteraction() = default;

  /// Entries in the row layout [[gamma, delta], [beta, alpha]].
  /// Throws InvalidArgument unless all entries are finite and
  /// |alpha*gamma - beta*delta - 1| <= tolerance.
  static ContactInteraction from_entries(double gamma, double delta, double beta, double alpha,
                                         double tolerance = kDeterminantTolerance);
  static ContactInteraction from_matrix(const RealMatrix2& m, double tolerance = kDeterminantTolerance);

  double gamma() const { return gamma_; }
  double delta() const { return delta_; }
  double beta() const { return beta_; }
  double alpha() const { return alpha_; }

  RealMatrix2 matrix() const { return {gamma_, delta_, beta_, alpha_}; }
  /// Exact inverse of an SL(2,R) element.
  ContactInteraction inverse() const;

  friend bool operator==(const ContactInteraction&, const ContactInteraction&) = default;
  friend ContactInteraction make_connection(const FamilySpec& spec, double tolerance);

 private:
  ContactInteraction(double gamma, double delta, double beta, double alpha)
      : gamma_(gamma), delta_(delta), beta_(beta), alpha_(alpha) {}

  double gamma_ = 1.0;
  double delta_ = 0.0;
  double beta_ = 0.0;
  double alpha_ = 1.0;
};

enum class FamilyKind { delta, epsilon, rotation, hyperbolic, raw };

std::string_view to_string(FamilyKind kind);
/// Throws InvalidArgument for unknown names.
FamilyKind parse_family_kind(std::string_view name);

/// One-parameter family member, or a raw matrix.
///   delta(v)       [[1, 0], [v, 1]]
///   epsilon(u)     [[1, u], [0, 1]]
///   rotation(p)    [[cos p, -sin p], [sin p, cos p]],  p in (-pi, pi]
///   hyperbolic(p)  [[cosh p, sinh p], [sinh p, cosh p]]
struct FamilySpec {
  FamilyKind kind = FamilyKind::delta;
  double param = 0.0;
  std::optional<RealMatrix2> raw_matrix;

  static FamilySpec delta(double v) { return {FamilyKind::delta, v, std::nullopt}; }
  static FamilySpec epsilon(double u) { return {FamilyKind::epsilon, u, std::nullopt}; }
  static FamilySpec rotation(double p) { return {FamilyKind::rotation, p, std::nullopt}; }
  static FamilySpec hyperbolic(double p) { return {FamilyKind::hyperbolic, p, std::nullopt}; }
  static FamilySpec raw(const RealMatrix2& m) { return {FamilyKind::raw, 0.0, m}; }
};

/// Family members are built exactly from the parameter; `tolerance` applies
/// to the determinant check of raw matrices.
ContactInteraction make_connection(const FamilySpec& spec, double tolerance = kDeterminantTolerance);

/// A real energy. The wavenumber k0 = sqrt(2mE) exists for E > 0 and the
/// decay constant kappa = sqrt(-2mE) for E < 0.
class Energy {
 public:
  explicit Energy(double value);

  double value() const { return value_; }
  std::optional<double> k0(const LatticeParams& lat) const;
  std::optional<double> kappa(const LatticeParams& lat) const;

 private:
  double value_;
};

/// Signed wavenumber axis used for k0-space plots: k0 for E >= 0, -kappa for E < 0.
double signed_wavenumber(double energy, const LatticeParams& lat);
/// Inverse of signed_wavenumber.
double energy_from_signed_wavenumber(double k0, const LatticeParams& lat);

/// G(x) = exp(H x) with H = [[0, 2m], [-2mE/(2m), 0]], continued to E <= 0.
RealMatrix2 propagator(double x, Energy energy, const LatticeParams& lat);

/// f(E) = Tr(G(a) V); real and continuous for all real E.
double trace_function(Energy energy, const ContactInteraction& v, const LatticeParams& lat);

/// |f(E)| <= 2.
bool band_condition(Energy energy, const ContactInteraction& v, const LatticeParams& lat);

namespace detail {

/// cos(sqrt(t)) for t >= 0, cosh(sqrt(-t)) for t < 0.
double cos_like(double t);
/// sin(sqrt(t))/sqrt(t) for t > 0, sinh(sqrt(-t))/sqrt(-t) for t < 0, 1 at t = 0.
double sinc_like(double t);

}  // namespace detail

}  // namespace kpb
