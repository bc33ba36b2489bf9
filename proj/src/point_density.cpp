#include "edt/point_density.hpp"

#include <cmath>
#include <stdexcept>

namespace edt {

double c_max_by_quadrature(const SourceModel& source) {
  auto integrand = [source](double x) {
    const double f = source.pdf(x);
    if (f <= 0.0) return 0.0;
    return std::cbrt(f / (x * x));
  };
  const double g = num::integrate(integrand, source.support(), 1e-10);
  return std::cbrt(1.0 / 12.0) * g;
}

PointDensity optimized_point_density(const SourceModel& source, double c, double beta_hat) {
  if (!(c > 0.0)) throw std::invalid_argument("optimized_point_density: c must be positive");
  if (!(beta_hat >= 0.0))
    throw std::invalid_argument("optimized_point_density: beta_hat must be nonnegative");
  // The relative slack admits c_max values rounded to ~5 digits.
  if (beta_hat == 0.0 && c > c_max_by_quadrature(source) * (1.0 + 1e-4))
    throw std::invalid_argument(
        "optimized_point_density: with beta_hat = 0 the density cannot integrate to 1 for c above "
        "c_max");
  auto eval = [source, c, beta_hat](double x) {
    const double f = source.pdf(x);
    if (f <= 0.0) return 0.0;
    return std::cbrt(f / (6.0 * c * c * (2.0 * c * x * x + beta_hat)));
  };
  return PointDensity(eval, source.support(), DensityFamily::OptimizedKkt, c, beta_hat);
}

PointDensity naive_point_density(const SourceModel& source) {
  auto shape = [source](double x) {
    const double f = source.pdf(x);
    return f > 0.0 ? std::cbrt(f) : 0.0;
  };
  const double norm = num::integrate(shape, source.support(), 1e-12);
  auto eval = [source, norm](double x) {
    const double f = source.pdf(x);
    return f > 0.0 ? std::cbrt(f) / norm : 0.0;
  };
  return PointDensity(eval, source.support(), DensityFamily::NaivePanterDite);
}

}  // namespace edt
