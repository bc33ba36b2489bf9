#pragma once

#include <functional>
#include <vector>

#include "edt/point_density.hpp"

namespace edt {

/// Compressor/expander pair realized from a point density: G(x) is the
/// cumulative density, G^{-1} its inverse. G is tabulated on an adaptive grid
/// (denser where lambda is large); each expand query refines the bracketing
/// cell with one bracketed root find. Immutable after construction.
class Compander {
 public:
  explicit Compander(PointDensity density);

  /// G(x) = int_{lower}^{x} lambda.
  double compress(double x) const;

  /// G^{-1}(u) for u in [0, 1].
  double expand(double u) const;

  double total_mass() const noexcept { return cum_.back(); }
  const PointDensity& density() const noexcept { return density_; }

 private:
  PointDensity density_;
  std::vector<double> grid_;  // ascending x
  std::vector<double> cum_;   // cum_[i] = mass below grid_[i]
};

/// The compressor G as a standalone callable.
std::function<double(double)> compressor(const PointDensity& density);

/// The expander G^{-1} as a standalone callable.
std::function<double(double)> expander(const PointDensity& density);

/// N-level quantizer realized from a point density: levels are the expander
/// images of the uniform mid-grid, boundaries of the uniform grid.
struct Quantizer {
  std::vector<double> levels;      // ascending reconstruction values, size N
  std::vector<double> boundaries;  // N + 1 cell edges, outer ones may be infinite
  int n_levels = 0;
};

Quantizer build_quantizer(const PointDensity& density, int n_levels);

/// int f / lambda^2, the high-resolution limit of 12 N^2 D(N).
double bennett_integral(const PointDensity& density, const SourceModel& source);

/// int x^2 lambda(x) dx.
double density_second_moment(const PointDensity& density);

/// Noiseless quantization MSE: sum_i int_{R_i} (x - xhat_i)^2 f(x) dx.
double finite_n_mse(const Quantizer& quantizer, const SourceModel& source);

/// A solved compander design for one source.
struct CompanderDesign {
  SourceModel source;
  double c = 0.0;
  double beta_hat = 0.0;
  PointDensity density;
  double omega = 0.0;                  // gamma-independent distortion coefficient
  double density_second_moment = 0.0;  // int x^2 lambda
};

}  // namespace edt
