#pragma once

#include <functional>
#include <utility>

#include "edt/source_model.hpp"

namespace edt {

enum class DensityFamily { OptimizedKkt, NaivePanterDite, Custom };

/// Point-density function lambda(x): nonnegative over its support, behaving
/// like a probability density once its normalization constraint is met.
/// Controls the local resolution of the compander quantizer.
class PointDensity {
 public:
  PointDensity(std::function<double(double)> eval, num::Interval support, DensityFamily family,
               double c = 0.0, double beta_hat = 0.0)
      : eval_(std::move(eval)), support_(support), family_(family), c_(c), beta_hat_(beta_hat) {}

  double operator()(double x) const { return eval_(x); }
  num::Interval support() const noexcept { return support_; }
  DensityFamily family() const noexcept { return family_; }

  // Valid for the OptimizedKkt family only.
  double c() const noexcept { return c_; }
  double beta_hat() const noexcept { return beta_hat_; }

 private:
  std::function<double(double)> eval_;
  num::Interval support_;
  DensityFamily family_;
  double c_;
  double beta_hat_;
};

/// End-to-end optimal density lambda(x) = (f(x) / (6 c^2 (2 c x^2 + beta_hat)))^{1/3}
/// restricted to the source support. Not normalized by itself: the caller picks
/// beta_hat so that the integral is 1 (see analysis::solve_beta_hat).
PointDensity optimized_point_density(const SourceModel& source, double c, double beta_hat);

/// Source-coding-optimal (Panter-Dite) density lambda = f^{1/3} / int f^{1/3}.
PointDensity naive_point_density(const SourceModel& source);

/// Largest c for which the beta_hat = 0 density still integrates to >= 1,
/// computed by quadrature of 12^{-1/3} int f^{1/3} |x|^{-2/3} dx.
double c_max_by_quadrature(const SourceModel& source);

}  // namespace edt
