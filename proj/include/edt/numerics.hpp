#pragma once

// Self-contained numerical kernel: definite integration over bounded,
// unbounded and origin-singular domains, bracketed root finding, scalar
// minimization, standard-normal cdf/quantile, gamma function.
//
// Everything here is a pure function of its inputs and safe to call
// concurrently.

#include <cmath>
#include <concepts>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "edt/errors.hpp"

namespace edt::num {

/// Integration or bracketing domain. Either endpoint may be infinite.
struct Interval {
  double lower;
  double upper;
};

/// Thrown when adaptive refinement runs out of budget; carries the last
/// estimate and its error bound.
class IntegrationError : public NumericalFailure {
 public:
  IntegrationError(const std::string& what, double estimate, double error_bound)
      : NumericalFailure(what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

// Gaussian-family integrands are below 1e-115 by |x| = 40; infinite endpoints
// are truncated there.
inline constexpr double kGaussianTailClamp = 40.0;

namespace detail {

inline constexpr int kMaxSegments = 100000;

// QUADPACK dqk15 abscissae and weights.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GkEstimate {
  double value;
  double error;
};

template <std::invocable<double> F>
GkEstimate gauss_kronrod_15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  auto eval = [&f](double x) {
    const double v = f(x);
    if (!std::isfinite(v))
      throw IntegrationError("integrate: non-finite integrand value at x=" + std::to_string(x), 0.0,
                             std::numeric_limits<double>::infinity());
    return v;
  };
  const double fc = eval(c);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[i];
    const double s = eval(c - dx) + eval(c + dx);
    kronrod += kKronrodWeights[i] * s;
    if (i & 1) gauss += kGaussWeights[i / 2] * s;
  }
  return {kronrod * h, std::fabs(kronrod - gauss) * h};
}

// Bisection-refined Gauss-Kronrod. Leaf tolerances halve with each split, so
// the accepted-leaf error bounds sum to at most abs_tol.
template <std::invocable<double> F>
double adaptive(F& f, double a, double b, double abs_tol) {
  struct Segment {
    double a, b, tol;
  };
  std::vector<Segment> todo{{a, b, abs_tol}};
  double total = 0.0;
  int segments = 0;
  while (!todo.empty()) {
    const Segment s = todo.back();
    todo.pop_back();
    const GkEstimate e = gauss_kronrod_15(f, s.a, s.b);
    ++segments;
    const double floor_width = 64.0 * std::numeric_limits<double>::epsilon() *
                               std::max({std::fabs(s.a), std::fabs(s.b), 1.0});
    if (e.error <= s.tol || s.b - s.a <= floor_width) {
      total += e.value;
      continue;
    }
    if (segments >= kMaxSegments) {
      double estimate = total + e.value;
      double bound = e.error;
      for (const Segment& r : todo) {
        const GkEstimate re = gauss_kronrod_15(f, r.a, r.b);
        estimate += re.value;
        bound += re.error;
      }
      throw IntegrationError("integrate: refinement budget exhausted", estimate, bound);
    }
    const double mid = 0.5 * (s.a + s.b);
    todo.push_back({s.a, mid, 0.5 * s.tol});
    todo.push_back({mid, s.b, 0.5 * s.tol});
  }
  return total;
}

// One monotone piece that may touch the origin. A piece with an endpoint at
// exactly 0 gets the substitution x = t^3, which removes |x|^{-p} endpoint
// singularities with p < 1 (in particular the |x|^{-2/3} family) exactly.
template <std::invocable<double> F>
double piece(F& f, double a, double b, double tol) {
  if (a == 0.0) {
    auto g = [&f](double t) { return 3.0 * t * t * f(t * t * t); };
    return adaptive(g, 0.0, std::cbrt(b), tol);
  }
  if (b == 0.0) {
    auto g = [&f](double t) { return 3.0 * t * t * f(-t * t * t); };
    return adaptive(g, 0.0, std::cbrt(-a), tol);
  }
  return adaptive(f, a, b, tol);
}

}  // namespace detail

/// Definite integral of f over `domain` with absolute tolerance `abs_tol`.
/// Infinite endpoints are truncated at |x| = 40 (Gaussian-tail rule); a
/// domain straddling the origin is split there, and pieces ending at 0
/// tolerate one integrable |x|^{-2/3}-type singularity at the origin.
template <std::invocable<double> F>
double integrate(F&& f, Interval domain, double abs_tol) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: abs_tol must be positive");
  if (std::isnan(domain.lower) || std::isnan(domain.upper) || !(domain.lower < domain.upper))
    throw std::invalid_argument("integrate: domain requires lower < upper");
  double a = domain.lower;
  double b = domain.upper;
  if (std::isinf(a)) a = -kGaussianTailClamp;
  if (std::isinf(b)) b = kGaussianTailClamp;
  if (!(a < b)) return 0.0;  // everything finite lies beyond the tail clamp
  auto& fn = f;
  if (a < 0.0 && 0.0 < b)
    return detail::piece(fn, a, 0.0, 0.5 * abs_tol) + detail::piece(fn, 0.0, b, 0.5 * abs_tol);
  return detail::piece(fn, a, b, abs_tol);
}

/// Bracketed secant/bisection hybrid. Returns x with the final bracket width
/// at most `tol`; the sign change is maintained throughout.
template <std::invocable<double> F>
double find_root(F&& g, Interval bracket, double tol) {
  double a = bracket.lower;
  double b = bracket.upper;
  if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b))
    throw std::invalid_argument("find_root: bracket must be finite with lower < upper");
  if (!(tol > 0.0)) throw std::invalid_argument("find_root: tol must be positive");
  double fa = g(a);
  if (fa == 0.0) return a;
  double fb = g(b);
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw std::invalid_argument("find_root: endpoints do not bracket a sign change");
  // Alternate secant and bisection steps; bisection every other step
  // guarantees the bracket halves at least once per pair.
  bool bisect = false;
  for (int iter = 0; iter < 400 && b - a > tol; ++iter) {
    double x = 0.5 * (a + b);
    if (!bisect && fb != fa) {
      const double s = b - fb * (b - a) / (fb - fa);
      const double margin = 1e-3 * (b - a);
      if (s > a + margin && s < b - margin) x = s;
    }
    bisect = !bisect;
    const double fx = g(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (fa > 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
  }
  return 0.5 * (a + b);
}

struct MinimizeResult {
  double argmin;
  double min_value;
};

/// Golden-section minimization of a unimodal h over a finite domain.
template <std::invocable<double> F>
MinimizeResult minimize_scalar(F&& h, Interval domain, double tol) {
  double a = domain.lower;
  double b = domain.upper;
  if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b))
    throw std::invalid_argument("minimize_scalar: domain must be finite with lower < upper");
  if (!(tol > 0.0)) throw std::invalid_argument("minimize_scalar: tol must be positive");
  constexpr double kInvPhi = 0.6180339887498949;
  constexpr double kInvPhi2 = 0.3819660112501051;
  double x1 = a + kInvPhi2 * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = h(x1);
  double f2 = h(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = a + kInvPhi2 * (b - a);
      f1 = h(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = h(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, h(xm)};
}

inline double std_normal_pdf(double x) {
  constexpr double kInvSqrt2Pi = 0.39894228040143268;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

inline double std_normal_cdf(double x) {
  constexpr double kInvSqrt2 = 0.70710678118654752;
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

/// Upper tail probability 1 - cdf(x), accurate for large x.
inline double std_normal_tail(double x) {
  constexpr double kInvSqrt2 = 0.70710678118654752;
  return 0.5 * std::erfc(x * kInvSqrt2);
}

namespace detail {

// Rational initial guess (Acklam) for the lower half p in (0, 0.5].
inline double quantile_seed_lower(double p) {
  if (p < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((-7.784894002430293e-03 * q - 3.223964580411365e-01) * q - 2.400758277161838e+00) * q -
              2.549732539343734e+00) *
                 q +
             4.374664141464968e+00) *
                q +
            2.938163982698783e+00) /
           ((((7.784695709041462e-03 * q + 3.224671290700398e-01) * q + 2.445134137142996e+00) * q +
             3.754408661907416e+00) *
                q +
            1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((-3.969683028665376e+01 * r + 2.209460984245205e+02) * r - 2.759285104469687e+02) * r +
            1.383577518672690e+02) *
               r -
           3.066479806614716e+01) *
              r +
          2.506628277459239e+00) *
         q /
         (((((-5.447609879822406e+01 * r + 1.615858368580409e+02) * r - 1.556989798598866e+02) * r +
            6.680131188771972e+01) *
               r -
           1.328068155288572e+01) *
              r +
          1.0);
}

}  // namespace detail

/// Inverse of std_normal_cdf on (0, 1); mutually inverse with the cdf to
/// better than 1e-12 over p in [1e-15, 1 - 1e-15].
inline double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("std_normal_quantile: p must lie in (0, 1)");
  if (p > 0.5) return -std_normal_quantile(1.0 - p);  // 1 - p is exact here
  double x = detail::quantile_seed_lower(p);
  for (int i = 0; i < 3; ++i) {
    const double err = std_normal_cdf(x) - p;
    const double d = std_normal_pdf(x);
    if (d <= 0.0) break;
    x -= err / d;
  }
  return x;
}

/// Gamma function on the positive axis.
inline double gamma_function(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_function: requires x > 0");
  return std::tgamma(x);
}

}  // namespace edt::num
