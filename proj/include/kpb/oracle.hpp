#pragma once

// Independent validators for the closed forms in core and scattering.
// Nothing in the production paths calls into this module.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "kpb/core.hpp"
#include "kpb/matrix2.hpp"

namespace kpb::oracle {

class OracleOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// exp(A) by scaling and squaring a truncated Taylor series, evaluated in
/// long double. Throws OracleOverflow when the result is not representable.
RealMatrix2 expm2(const RealMatrix2& a);
ComplexMatrix2 expm2(const ComplexMatrix2& a);

/// Generator H of the field-free evolution: [[0, 2m], [-E, 0]].
RealMatrix2 free_generator(Energy energy, const LatticeParams& lat);

/// Right eigenvectors u(+-k0) of G(x) and eigenvectors v(+-k0) of its adjoint.
struct BiorthoPair {
  ComplexVector2 u_plus;
  ComplexVector2 u_minus;
  ComplexVector2 v_plus;
  ComplexVector2 v_minus;
};

/// Requires k0 > 0.
BiorthoPair biortho_vectors(double k0, const LatticeParams& lat);

struct EigenReport {
  double u_residual = 0.0;       // |G u(+-) - e^{+-ik0x} u(+-)|
  double v_residual = 0.0;       // |G^dagger v(+-) - e^{-+ik0x} v(+-)|
  double biortho_residual = 0.0; // bi-orthogonality defects
  double max_residual() const;
};

/// Requires E > 0.
EigenReport eigencheck_G(double x, Energy energy, const LatticeParams& lat);

struct BlochReport {
  /// |Tr(G~(a) V~) - e^{-ika} Tr(G(a) V)|; holds for any k.
  double trace_form_residual = 0.0;
  /// |Tr(G~(a) V~) - (1 + e^{-2ika})|; vanishes only on shell.
  double periodicity_trace_residual = 0.0;
  /// |det(I - G~(a) V~)|; vanishes only on shell.
  double det_residual = 0.0;
  /// |det G~(a) - e^{-2ika}|.
  double det_phase_residual = 0.0;
  /// max entry difference between exp(H~ a) and its closed form.
  double closed_form_residual = 0.0;
  /// |f(E) - 2 cos(ka)|.
  double shell_mismatch = 0.0;
};

/// Builds the Bloch-space generator, its exponential and the conjugated
/// connection matrix (M taken at x = 0) and reports the trace identities.
BlochReport bloch_consistency(Energy energy, double k, const ContactInteraction& v, const LatticeParams& lat);

/// |T|^2 from complex amplitudes: |v(+)^dagger V^-1 u(+)|^-2.
double transmission_via_amplitude(const ContactInteraction& v, double k0, const LatticeParams& lat);

/// Haar-like random SL(2,R) element R(t1) diag(e^s, e^-s) R(t2), |s| <= max_squeeze.
ContactInteraction random_connection(std::mt19937_64& rng, double max_squeeze = 1.5);

struct VerifyOptions {
  std::uint64_t seed = 20040816;
  std::size_t samples = 1000;
  std::size_t small_energy_samples = 50;
  std::size_t bloch_samples = 100;
  LatticeParams lattice;
  /// When set, replaces every upper threshold below.
  std::optional<double> tolerance_override;
  double closed_form_tolerance = kOracleTolerance;
  double biortho_tolerance = 1e-12;
  double bloch_tolerance = 1e-9;
  double transmission_tolerance = 1e-12;
  double off_shell_margin = 1e-3;
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  /// true: value must exceed threshold (negative control).
  bool lower_bound = false;
  bool passed() const { return lower_bound ? value > threshold : value < threshold; }
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Seeded oracle battery: closed forms vs matrix exponential, eigenvectors,
/// bi-orthogonality, Bloch-space identities and scattering amplitudes.
VerifyReport run_verification(const VerifyOptions& options);

}  // namespace kpb::oracle
