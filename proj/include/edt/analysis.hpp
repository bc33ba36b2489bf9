#pragma once

#include <cstdint>
#include <utility>

#include "edt/compander.hpp"

namespace edt {

/// Largest admissible c: the beta_hat = 0 normalization boundary. Closed form,
/// cross-checked against quadrature to 1e-6.
double c_max(const SourceModel& source);

/// beta_hat >= 0 normalizing the optimized density for a given c in (0, c_max];
/// exactly 0 at c = c_max.
double solve_beta_hat(const SourceModel& source, double c);

/// Omega(c), the gamma-independent coefficient of e^{-gamma/6} in the end-to-end
/// distortion bound. Two algebraic routes (direct Bennett quadrature and the
/// KKT-simplified form) are evaluated and must agree to 1e-6 relative.
double omega(const SourceModel& source, double c);

/// Golden-section minimization of Omega over (0, c_max], with an empirical
/// unimodality check on a 64-point grid first. Memoized per source.
CompanderDesign optimize_design(const SourceModel& source);

/// Panter-Dite density with the end-to-end-optimal coefficient c for that
/// fixed density (closed-form minimization of a*c + b/c^2).
CompanderDesign naive_design(const SourceModel& source);

struct DispersionReport {
  SourceKind source_kind;
  double c_opt;
  double beta_hat_opt;
  double omega_opt;
  double dispersion_lower_bound;  // -ln(omega_opt)
  double naive_omega;
  double naive_dispersion;
  double gap_db;  // 10 log10(naive_omega / omega_opt)
};

/// Optimized-vs-naive comparison for one source.
DispersionReport naive_design_report(const SourceModel& source);

/// Upper bound on the ML outage probability; stated only for ln N <= gamma/2
/// (ConfigError outside that regime).
double outage_probability_bound(double gamma, std::int64_t n_levels);

/// Exact ML error probability for N equal-energy orthogonal signals at ENR
/// gamma: int phi(t) (1 - Phi(t + sqrt(gamma))^{N-1}) dt.
double exact_orthogonal_error_prob(double gamma, std::int64_t n_levels);

enum class ExponentRegime { BelowOneEighth, Middle };

struct ExponentResult {
  double tau_opt;
  double exponent;
  ExponentRegime regime;
};

/// max over tau of min(quantization exponent 2*tau, outage exponent).
ExponentResult scheme_exponent();

/// N = round(c e^{gamma/12}), clamped to >= 2.
std::int64_t num_levels(double c, double gamma);

/// Omega * e^{-gamma/6}.
double end_to_end_bound(const CompanderDesign& design, double gamma);

/// sigma_X^2 + int x^2 lambda: high-resolution cap on E[(X-Xhat)^2 | outage].
double outage_conditional_bound(const CompanderDesign& design);

/// Parameters of the uniform-quantizer + MAP baseline scheme.
struct KnoppParams {
  int bits;      // quantization bits per source component, >= 2
  double rho;    // Gallager-style parameter in [0, 1]
  double delta;  // truncation half-width, 2 sqrt(bits ln 2)

  KnoppParams(int bits_in, double rho_in);
};

/// Distortion upper bound of the baseline scheme at ENR gamma.
double knopp_distortion_bound(double gamma, const KnoppParams& params);

/// Minimizes the baseline bound over integer bits in [2, b_cap] and a twice-
/// refined 1024-point rho grid in [0, 1].
std::pair<KnoppParams, double> knopp_optimize(double gamma, int b_cap = 4096);

/// Closed-form large-gamma bound of the baseline scheme,
/// e^{-gamma/6} (sqrt(6/(pi gamma)) (1 + e^{-gamma/6}(4 gamma/3 + 1)) + 5 gamma/3).
double knopp_analytic_bound(double gamma);

struct KnoppExponent {
  double b_prime_opt;  // bits per unit ENR
  double rho_opt;
  double theta;  // energy-distortion exponent
};

/// max-min exponent of the baseline scheme over (b', rho).
KnoppExponent knopp_exponent();

}  // namespace edt
