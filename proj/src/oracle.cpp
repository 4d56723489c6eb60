#include "kpb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "kpb/scattering.hpp"

namespace kpb::oracle {

namespace {

using ld = long double;
using cld = std::complex<long double>;

template <typename S>
ld entry_abs(const S& v) {
  using std::abs;
  return abs(v);
}

template <typename S>
ld inf_norm(const Matrix2<S>& a) {
  return std::max(entry_abs(a.m00) + entry_abs(a.m01), entry_abs(a.m10) + entry_abs(a.m11));
}

template <typename S>
bool all_finite(const Matrix2<S>& a) {
  auto fin = [](const S& v) {
    if constexpr (is_complex<S>::value) {
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    } else {
      return std::isfinite(v);
    }
  };
  return fin(a.m00) && fin(a.m01) && fin(a.m10) && fin(a.m11);
}

template <typename S>
Matrix2<S> expm_impl(const Matrix2<S>& a) {
  if (!all_finite(a)) throw OracleOverflow("expm2: non-finite input");
  const ld norm = inf_norm(a);
  // exp(A) entries are bounded by exp(|A|); beyond ~11000 long double overflows.
  if (norm > 11000.0L) throw OracleOverflow("expm2: input norm too large");

  int squarings = 0;
  if (norm > 0.125L) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.125L)));
  }
  const S scale = S(std::ldexp(1.0L, -squarings));
  const Matrix2<S> b = scale * a;

  // Taylor series; |B| <= 1/8 so 20 terms are far below long double epsilon.
  Matrix2<S> sum = Matrix2<S>::identity();
  Matrix2<S> term = Matrix2<S>::identity();
  for (int n = 1; n <= 20; ++n) {
    term = S(1.0L / n) * (term * b);
    sum = sum + term;
  }
  for (int i = 0; i < squarings; ++i) {
    sum = sum * sum;
  }
  if (!all_finite(sum)) throw OracleOverflow("expm2: result overflowed");
  return sum;
}

}  // namespace

RealMatrix2 expm2(const RealMatrix2& a) {
  const Matrix2<ld> r = expm_impl(Matrix2<ld>{a.m00, a.m01, a.m10, a.m11});
  RealMatrix2 out{static_cast<double>(r.m00), static_cast<double>(r.m01), static_cast<double>(r.m10),
                  static_cast<double>(r.m11)};
  if (!all_finite(out)) throw OracleOverflow("expm2: result exceeds double range");
  return out;
}

ComplexMatrix2 expm2(const ComplexMatrix2& a) {
  auto up = [](std::complex<double> z) { return cld(z.real(), z.imag()); };
  auto down = [](cld z) { return std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag())); };
  const Matrix2<cld> r = expm_impl(Matrix2<cld>{up(a.m00), up(a.m01), up(a.m10), up(a.m11)});
  ComplexMatrix2 out{down(r.m00), down(r.m01), down(r.m10), down(r.m11)};
  if (!all_finite(out)) throw OracleOverflow("expm2: result exceeds double range");
  return out;
}

RealMatrix2 free_generator(Energy energy, const LatticeParams& lat) {
  return {0.0, 2.0 * lat.mass(), -energy.value(), 0.0};
}

BiorthoPair biortho_vectors(double k0, const LatticeParams& lat) {
  if (!(k0 > 0.0)) throw InvalidArgument("biortho_vectors: k0 must be positive");
  using c = std::complex<double>;
  const double two_m = 2.0 * lat.mass();
  const double s = 1.0 / std::sqrt(2.0);
  BiorthoPair p;
  p.u_plus = {c(s), c(0.0, s * k0 / two_m)};
  p.u_minus = {c(s), c(0.0, -s * k0 / two_m)};
  p.v_plus = {c(s), c(0.0, s * two_m / k0)};
  p.v_minus = {c(s), c(0.0, -s * two_m / k0)};
  return p;
}

double EigenReport::max_residual() const { return std::max({u_residual, v_residual, biortho_residual}); }

namespace {

double vec_residual(const ComplexVector2& a, const ComplexVector2& b) {
  return std::max(std::abs(a.x0 - b.x0), std::abs(a.x1 - b.x1));
}

}  // namespace

EigenReport eigencheck_G(double x, Energy energy, const LatticeParams& lat) {
  const auto k0 = energy.k0(lat);
  if (!k0) throw InvalidArgument("eigencheck_G: energy must be positive");
  using c = std::complex<double>;
  const ComplexMatrix2 g = to_complex(propagator(x, energy, lat));
  const ComplexMatrix2 gd = g.adjoint();
  const BiorthoPair p = biortho_vectors(*k0, lat);
  const c up = std::exp(c(0.0, *k0 * x));
  const c dn = std::exp(c(0.0, -*k0 * x));

  EigenReport r;
  r.u_residual = std::max(vec_residual(g * p.u_plus, up * p.u_plus), vec_residual(g * p.u_minus, dn * p.u_minus));
  r.v_residual = std::max(vec_residual(gd * p.v_plus, dn * p.v_plus), vec_residual(gd * p.v_minus, up * p.v_minus));
  r.biortho_residual = std::max({std::abs(dot_adjoint(p.v_plus, p.u_plus) - 1.0),
                                 std::abs(dot_adjoint(p.v_minus, p.u_minus) - 1.0),
                                 std::abs(dot_adjoint(p.v_minus, p.u_plus)),
                                 std::abs(dot_adjoint(p.v_plus, p.u_minus))});
  return r;
}

BlochReport bloch_consistency(Energy energy, double k, const ContactInteraction& v, const LatticeParams& lat) {
  using c = std::complex<double>;
  const double m = lat.mass();
  const double a = lat.spacing();
  const double e = energy.value();
  const double k0sq = 2.0 * m * e;
  const c ik(0.0, k);

  const ComplexMatrix2 h_tilde{0.0, 2.0 * m, (k * k - k0sq) / (2.0 * m), c(0.0, -2.0 * k)};
  const ComplexMatrix2 g_tilde = expm2(c(a) * h_tilde);

  const ComplexMatrix2 mm{1.0, 0.0, ik / (2.0 * m), 1.0};
  const ComplexMatrix2 mm_inv{1.0, 0.0, -ik / (2.0 * m), 1.0};
  const ComplexMatrix2 v_tilde = mm_inv * to_complex(v.matrix()) * mm;

  const ComplexMatrix2 prod = g_tilde * v_tilde;
  const c phase = std::exp(c(0.0, -k * a));
  const double f = trace_function(energy, v, lat);

  BlochReport r;
  r.trace_form_residual = std::abs(prod.trace() - phase * f);
  r.periodicity_trace_residual = std::abs(prod.trace() - (1.0 + phase * phase));
  r.det_residual = std::abs((ComplexMatrix2::identity() - prod).det());
  r.det_phase_residual = std::abs(g_tilde.det() - phase * phase);

  // e^{-ika} [cos(k0 a) I + sin(k0 a)/k0 [[ik, 2m], [(k^2 - k0^2)/2m, -ik]]]
  const c k0 = std::sqrt(c(k0sq));
  const c cos_term = std::cos(k0 * a);
  const c sin_term = std::abs(k0) > 0.0 ? std::sin(k0 * a) / k0 : c(a);
  const ComplexMatrix2 bracket{ik, 2.0 * m, (k * k - k0sq) / (2.0 * m), -ik};
  const ComplexMatrix2 closed = phase * (cos_term * ComplexMatrix2::identity() + sin_term * bracket);
  r.closed_form_residual = max_abs_diff(closed, g_tilde);

  r.shell_mismatch = std::abs(f - 2.0 * std::cos(k * a));
  return r;
}

double transmission_via_amplitude(const ContactInteraction& v, double k0, const LatticeParams& lat) {
  const BiorthoPair p = biortho_vectors(k0, lat);
  const ComplexMatrix2 v_inv = to_complex(v.matrix().inverse());
  const std::complex<double> amp = dot_adjoint(p.v_plus, v_inv * p.u_plus);
  return 1.0 / std::norm(amp);
}

ContactInteraction random_connection(std::mt19937_64& rng, double max_squeeze) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> squeeze(-max_squeeze, max_squeeze);
  auto rot = [](double t) { return RealMatrix2{std::cos(t), -std::sin(t), std::sin(t), std::cos(t)}; };
  const double s = squeeze(rng);
  const RealMatrix2 d{std::exp(s), 0.0, 0.0, std::exp(-s)};
  const double t1 = angle(rng);
  const double t2 = angle(rng);
  return ContactInteraction::from_matrix(rot(t1) * d * rot(t2));
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

VerifyReport run_verification(const VerifyOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  const LatticeParams& lat = opt.lattice;
  const double a = lat.spacing();
  auto upper = [&](double t) { return opt.tolerance_override.value_or(t); };

  std::uniform_real_distribution<double> energy_dist(-10.0, 100.0);
  std::uniform_real_distribution<double> small_energy_dist(-1e-3, 1e-3);
  std::uniform_real_distribution<double> positive_energy_dist(1e-2, 100.0);
  std::uniform_real_distribution<double> x_dist(-3.0, 3.0);
  std::uniform_real_distribution<double> log_k0_dist(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double trace_res = 0.0;
  const std::size_t n_trace = opt.samples + opt.small_energy_samples;
  for (std::size_t i = 0; i < n_trace; ++i) {
    const Energy e(i < opt.samples ? energy_dist(rng) : small_energy_dist(rng));
    const ContactInteraction v = random_connection(rng);
    const double closed = trace_function(e, v, lat);
    const double brute = (expm2(a * free_generator(e, lat)) * v.matrix()).trace();
    trace_res = std::max(trace_res, std::abs(closed - brute));
  }

  double prop_res = 0.0;
  double eigen_res = 0.0;
  double biortho_res = 0.0;
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const double x = x_dist(rng);
    const Energy e(energy_dist(rng));
    prop_res = std::max(prop_res, max_abs_diff(propagator(x, e, lat), expm2(x * free_generator(e, lat))));
    const Energy ep(positive_energy_dist(rng));
    const EigenReport er = eigencheck_G(x, ep, lat);
    eigen_res = std::max({eigen_res, er.u_residual, er.v_residual});
    biortho_res = std::max(biortho_res, er.biortho_residual);
  }

  double on_det = 0.0;
  double on_trace = 0.0;
  double trace_form = 0.0;
  double closed_form = 0.0;
  double det_phase = 0.0;
  double off_det = std::numeric_limits<double>::infinity();
  double off_trace = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < opt.bloch_samples; ++i) {
    ContactInteraction v;
    double f = 0.0;
    Energy e(0.0);
    do {
      v = random_connection(rng);
      e = Energy(energy_dist(rng));
      f = trace_function(e, v, lat);
    } while (std::abs(f) > 2.0);
    const double k = std::acos(std::clamp(f / 2.0, -1.0, 1.0)) / a;
    const BlochReport on = bloch_consistency(e, k, v, lat);
    on_det = std::max(on_det, on.det_residual);
    on_trace = std::max(on_trace, on.periodicity_trace_residual);

    // Off shell: move cos(ka) by 1/4 while staying in [-1, 1].
    const double shifted = f / 2.0 > 0.0 ? f / 2.0 - 0.25 : f / 2.0 + 0.25;
    const double k_off = std::acos(shifted) / a * (unit(rng) < 0.5 ? 1.0 : -1.0);
    const BlochReport off = bloch_consistency(e, k_off, v, lat);
    off_det = std::min(off_det, off.det_residual);
    off_trace = std::min(off_trace, off.periodicity_trace_residual);

    for (const BlochReport* r : {&on, &off}) {
      trace_form = std::max(trace_form, r->trace_form_residual);
      closed_form = std::max(closed_form, r->closed_form_residual);
      det_phase = std::max(det_phase, r->det_phase_residual);
    }
  }

  double amp_res = 0.0;
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const ContactInteraction v = random_connection(rng);
    const double k0 = std::pow(10.0, log_k0_dist(rng));
    const double closed = transmission_probability(v, k0, lat).T2;
    amp_res = std::max(amp_res, std::abs(closed - transmission_via_amplitude(v, k0, lat)));
  }

  VerifyReport report;
  report.checks = {
      {"trace_vs_expm", trace_res, upper(opt.closed_form_tolerance)},
      {"propagator_vs_expm", prop_res, upper(opt.closed_form_tolerance)},
      {"eigenvectors_G", eigen_res, upper(opt.closed_form_tolerance)},
      {"biorthogonality", biortho_res, upper(opt.biortho_tolerance)},
      {"bloch_trace_form", trace_form, upper(opt.bloch_tolerance)},
      {"bloch_closed_form", closed_form, upper(opt.bloch_tolerance)},
      {"bloch_det_phase", det_phase, upper(opt.bloch_tolerance)},
      {"bloch_on_shell_det", on_det, upper(opt.bloch_tolerance)},
      {"bloch_on_shell_trace", on_trace, upper(opt.bloch_tolerance)},
      {"bloch_off_shell_det", off_det, opt.off_shell_margin, true},
      {"bloch_off_shell_trace", off_trace, opt.off_shell_margin, true},
      {"transmission_amplitude", amp_res, upper(opt.transmission_tolerance)},
  };
  return report;
}

}  // namespace kpb::oracle
