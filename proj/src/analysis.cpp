#include "edt/analysis.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "edt/errors.hpp"

namespace edt {

namespace {

struct Tolerances {
  double integral;
  double root;
};

constexpr Tolerances kTight{1e-10, 1e-9};
constexpr Tolerances kLoop{1e-8, 1e-7};  // inside optimization loops

double closed_form_c_max(const SourceModel& source) {
  if (source.kind() == SourceKind::GaussianStdNormal)
    return std::pow(4.0 * 243.0 / M_PI, 1.0 / 6.0) * num::gamma_function(7.0 / 6.0);
  // int_{-1/2}^{1/2} |x|^{-2/3} dx = 6 * 2^{-1/3}
  return 6.0 * std::pow(2.0, -1.0 / 3.0) / std::pow(12.0, 1.0 / 3.0);
}

double density_integral(const SourceModel& source, double c, double beta_hat, double tol) {
  const PointDensity lam = optimized_point_density(source, c, beta_hat);
  return num::integrate([&lam](double x) { return lam(x); }, lam.support(), tol);
}

double solve_beta_hat_impl(const SourceModel& source, double c, const Tolerances& tol) {
  const double i0 = density_integral(source, c, 0.0, tol.integral);
  if (i0 <= 1.0) {
    if (i0 >= 1.0 - 1e-6) return 0.0;  // c sits at the normalization boundary
    throw std::invalid_argument("solve_beta_hat: no nonnegative solution, c exceeds c_max");
  }
  double hi = 16.0;
  while (density_integral(source, c, hi, tol.integral) > 1.0) {
    hi *= 2.0;
    if (hi > 1e12) throw NumericalFailure("solve_beta_hat: failed to bracket the solution");
  }
  auto gap = [&](double bh) {
    return (bh <= 0.0 ? i0 : density_integral(source, c, bh, tol.integral)) - 1.0;
  };
  return num::find_root(gap, {0.0, hi}, tol.root);
}

struct OmegaParts {
  double generic;  // 2c (sigma^2 + m2) + Bennett / (12 c^2)
  double kkt;      // 2c sigma^2 + 3c m2 + beta_hat / 2
  double beta_hat;
  double second_moment;
  double bennett;
};

OmegaParts omega_parts(const SourceModel& source, double c, const Tolerances& tol) {
  if (!(c > 0.0)) throw std::invalid_argument("omega: c must be positive");
  const double beta_hat = solve_beta_hat_impl(source, c, tol);
  const PointDensity lam = optimized_point_density(source, c, beta_hat);
  const double m2 =
      num::integrate([&lam](double x) { return x * x * lam(x); }, lam.support(), tol.integral);
  const double bennett = num::integrate(
      [&lam, &source](double x) {
        const double f = source.pdf(x);
        if (f <= 1e-300) return 0.0;  // lambda may underflow to 0 out here
        const double l = lam(x);
        return f / (l * l);
      },
      lam.support(), tol.integral);
  const double s2 = source.second_moment();
  OmegaParts parts;
  parts.beta_hat = beta_hat;
  parts.second_moment = m2;
  parts.bennett = bennett;
  parts.generic = 2.0 * c * (s2 + m2) + bennett / (12.0 * c * c);
  parts.kkt = 2.0 * c * s2 + 3.0 * c * m2 + 0.5 * beta_hat;
  return parts;
}

void check_omega_consistency(const OmegaParts& parts) {
  if (std::fabs(parts.generic - parts.kkt) > 1e-6 * std::fabs(parts.generic)) {
    std::ostringstream msg;
    msg << "omega: quadrature and KKT-simplified routes disagree (" << parts.generic << " vs "
        << parts.kkt << ")";
    throw NumericalFailure(msg.str());
  }
}

CompanderDesign optimize_design_impl(const SourceModel& source) {
  const double hi = c_max(source);
  const double lo = 0.05;

  auto omega_relaxed = [&source](double c) { return omega_parts(source, c, kLoop).generic; };

  // Empirical unimodality check before trusting golden section.
  constexpr int kGridPoints = 64;
  std::vector<double> cs(kGridPoints), os(kGridPoints);
  for (int i = 0; i < kGridPoints; ++i) {
    cs[i] = lo + (hi - lo) * i / (kGridPoints - 1);
    os[i] = omega_relaxed(cs[i]);
  }
  bool rising = false;
  for (int i = 1; i < kGridPoints; ++i) {
    const double d = os[i] - os[i - 1];
    if (d > 0.0) {
      rising = true;
    } else if (d < 0.0 && rising) {
      std::ostringstream msg;
      msg << "optimize_design: Omega(c) is not unimodal on the check grid; samples:";
      for (int j = 0; j < kGridPoints; ++j) msg << " (" << cs[j] << ", " << os[j] << ")";
      throw NumericalFailure(msg.str());
    }
  }

  const auto min = num::minimize_scalar(omega_relaxed, {lo, hi}, 1e-6);
  const double c_opt = min.argmin;
  const OmegaParts parts = omega_parts(source, c_opt, kTight);
  check_omega_consistency(parts);
  return CompanderDesign{source,
                         c_opt,
                         parts.beta_hat,
                         optimized_point_density(source, c_opt, parts.beta_hat),
                         parts.generic,
                         parts.second_moment};
}

CompanderDesign naive_design_impl(const SourceModel& source) {
  const PointDensity lam = naive_point_density(source);
  const double m2 = density_second_moment(lam);
  const double bennett = bennett_integral(lam, source);
  // End-to-end coefficient a c + b / c^2 with the density held fixed.
  const double a = 2.0 * (source.second_moment() + m2);
  const double b = bennett / 12.0;
  const double c_star = std::cbrt(2.0 * b / a);
  const double omega_naive = 1.5 * a * c_star;
  return CompanderDesign{source, c_star, 0.0, lam, omega_naive, m2};
}

}  // namespace

double c_max(const SourceModel& source) {
  auto check = [](const SourceModel& s) {
    const double closed = closed_form_c_max(s);
    const double quad = c_max_by_quadrature(s);
    if (std::fabs(closed - quad) > 1e-6)
      throw NumericalFailure("c_max: closed form and quadrature disagree");
    return closed;
  };
  if (source.kind() == SourceKind::GaussianStdNormal) {
    static const double v = check(source);
    return v;
  }
  static const double v = check(source);
  return v;
}

double solve_beta_hat(const SourceModel& source, double c) {
  if (!(c > 0.0) || c > c_max(source) * (1.0 + 1e-12))
    throw std::invalid_argument("solve_beta_hat: requires 0 < c <= c_max");
  return solve_beta_hat_impl(source, c, kTight);
}

double omega(const SourceModel& source, double c) {
  const OmegaParts parts = omega_parts(source, c, kTight);
  check_omega_consistency(parts);
  return parts.generic;
}

CompanderDesign optimize_design(const SourceModel& source) {
  if (source.kind() == SourceKind::GaussianStdNormal) {
    static const CompanderDesign d = optimize_design_impl(source);
    return d;
  }
  static const CompanderDesign d = optimize_design_impl(source);
  return d;
}

CompanderDesign naive_design(const SourceModel& source) {
  if (source.kind() == SourceKind::GaussianStdNormal) {
    static const CompanderDesign d = naive_design_impl(source);
    return d;
  }
  static const CompanderDesign d = naive_design_impl(source);
  return d;
}

DispersionReport naive_design_report(const SourceModel& source) {
  const CompanderDesign opt = optimize_design(source);
  const CompanderDesign nai = naive_design(source);
  DispersionReport report;
  report.source_kind = source.kind();
  report.c_opt = opt.c;
  report.beta_hat_opt = opt.beta_hat;
  report.omega_opt = opt.omega;
  report.dispersion_lower_bound = -std::log(opt.omega);
  report.naive_omega = nai.omega;
  report.naive_dispersion = -std::log(nai.omega);
  report.gap_db = 10.0 * std::log10(nai.omega / opt.omega);
  return report;
}

double outage_probability_bound(double gamma, std::int64_t n_levels) {
  if (n_levels < 1) throw std::invalid_argument("outage_probability_bound: n_levels must be >= 1");
  if (!(gamma >= 0.0)) throw std::invalid_argument("outage_probability_bound: gamma must be >= 0");
  const double ln_n = std::log(static_cast<double>(n_levels));
  if (ln_n > 0.5 * gamma)
    throw ConfigError("outage_probability_bound: stated only for ln N <= gamma/2");
  if (ln_n < gamma / 8.0) return 2.0 * std::exp(ln_n - 0.25 * gamma);
  const double d = std::sqrt(gamma) - std::sqrt(2.0 * ln_n);
  return 2.0 * std::exp(-0.5 * d * d);
}

double exact_orthogonal_error_prob(double gamma, std::int64_t n_levels) {
  if (n_levels < 1)
    throw std::invalid_argument("exact_orthogonal_error_prob: n_levels must be >= 1");
  if (!(gamma >= 0.0)) throw std::invalid_argument("exact_orthogonal_error_prob: gamma must be >= 0");
  if (n_levels == 1) return 0.0;
  const double s = std::sqrt(gamma);
  const double k = static_cast<double>(n_levels - 1);
  auto integrand = [s, k](double t) {
    const double q = num::std_normal_tail(t + s);
    if (q >= 1.0) return num::std_normal_pdf(t);
    if (q <= 0.0) return 0.0;
    return num::std_normal_pdf(t) * (-std::expm1(k * std::log1p(-q)));
  };
  return num::integrate(integrand, {-12.0, 12.0 + s}, 1e-13);
}

ExponentResult scheme_exponent() {
  // The quantization exponent 2 tau rises in tau while the outage exponent
  // falls, so the max-min sits at the equalizer. In the low branch
  // 2 tau = 1/4 - tau gives tau = 1/12, which indeed lies below 1/8.
  const double tau = 1.0 / 12.0;
  return {tau, 2.0 * tau, tau < 0.125 ? ExponentRegime::BelowOneEighth : ExponentRegime::Middle};
}

std::int64_t num_levels(double c, double gamma) {
  if (!(c > 0.0)) throw std::invalid_argument("num_levels: c must be positive");
  if (!(gamma >= 0.0)) throw std::invalid_argument("num_levels: gamma must be >= 0");
  const double n = c * std::exp(gamma / 12.0);
  if (!(n < 9.0e15)) throw ConfigError("num_levels: gamma too large, level count overflows");
  const auto rounded = static_cast<std::int64_t>(std::llround(n));
  return rounded < 2 ? 2 : rounded;
}

double end_to_end_bound(const CompanderDesign& design, double gamma) {
  return design.omega * std::exp(-gamma / 6.0);
}

double outage_conditional_bound(const CompanderDesign& design) {
  return design.source.second_moment() + design.density_second_moment;
}

}  // namespace edt
