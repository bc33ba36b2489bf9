#include "edt/compander.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "edt/errors.hpp"

namespace edt {

namespace {

// Cells carry at most this much probability mass; refinement is what makes
// the grid denser where lambda is large (including integrable peaks).
constexpr double kCellMassCap = 1.0 / 256.0;
constexpr int kBaseCells = 256;
constexpr std::size_t kMaxCells = 100000;

}  // namespace

Compander::Compander(PointDensity density) : density_(std::move(density)) {
  const num::Interval sup = density_.support();
  const double lo = std::max(sup.lower, -num::kGaussianTailClamp);
  const double hi = std::min(sup.upper, num::kGaussianTailClamp);
  if (!(lo < hi)) throw std::invalid_argument("Compander: empty support");
  const double span = hi - lo;
  const double min_width = 1e-12 * span;

  auto mass_of = [this](double a, double b) {
    return num::integrate([this](double x) { return density_(x); }, {a, b}, 1e-13);
  };

  std::vector<double> knots;
  knots.reserve(kBaseCells + 2);
  for (int i = 0; i <= kBaseCells; ++i) knots.push_back(lo + span * i / kBaseCells);
  if (lo < 0.0 && 0.0 < hi) knots.push_back(0.0);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  struct Cell {
    double a, b, mass;
  };
  std::vector<Cell> work;
  std::vector<Cell> done;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    work.push_back({knots[i], knots[i + 1], mass_of(knots[i], knots[i + 1])});
  while (!work.empty()) {
    const Cell c = work.back();
    work.pop_back();
    if (c.mass <= kCellMassCap || c.b - c.a <= min_width) {
      done.push_back(c);
      continue;
    }
    if (done.size() + work.size() >= kMaxCells)
      throw NumericalFailure("Compander: grid refinement did not terminate");
    const double mid = 0.5 * (c.a + c.b);
    work.push_back({c.a, mid, mass_of(c.a, mid)});
    work.push_back({mid, c.b, mass_of(mid, c.b)});
  }
  std::sort(done.begin(), done.end(), [](const Cell& x, const Cell& y) { return x.a < y.a; });

  grid_.reserve(done.size() + 1);
  cum_.reserve(done.size() + 1);
  grid_.push_back(done.front().a);
  cum_.push_back(0.0);
  for (const Cell& c : done) {
    grid_.push_back(c.b);
    cum_.push_back(cum_.back() + c.mass);
  }
}

double Compander::compress(double x) const {
  if (x <= grid_.front()) return 0.0;
  if (x >= grid_.back()) return cum_.back();
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
  if (x == grid_[i]) return cum_[i];
  return cum_[i] +
         num::integrate([this](double t) { return density_(t); }, {grid_[i], x}, 1e-13);
}

double Compander::expand(double u) const {
  if (!(u >= 0.0 && u <= 1.0))
    throw std::domain_error("Compander::expand: argument must lie in [0, 1]");
  if (u <= 0.0) return grid_.front();
  if (u >= cum_.back()) return grid_.back();
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  std::size_t i = static_cast<std::size_t>(it - cum_.begin()) - 1;
  i = std::min(i, cum_.size() - 2);
  const double a = grid_[i];
  const double b = grid_[i + 1];
  if (cum_[i] >= u) return a;
  if (cum_[i + 1] <= u) return b;
  auto g = [this, i, a, b, u](double x) {
    if (x <= a) return cum_[i] - u;
    if (x >= b) return cum_[i + 1] - u;
    return cum_[i] + num::integrate([this](double t) { return density_(t); }, {a, x}, 1e-13) - u;
  };
  double x = num::find_root(g, {a, b}, 1e-10);
  // Newton polish: an x-width of 1e-10 still leaves a lambda-sized residual in
  // u where the density is steep, so push the residual itself down.
  for (int step = 0; step < 2; ++step) {
    const double slope = density_(x);
    if (!(slope > 0.0) || !std::isfinite(slope)) break;
    const double resid = g(x);
    if (std::fabs(resid) <= 1e-14) break;
    x = std::clamp(x - resid / slope, a, b);
  }
  return x;
}

std::function<double(double)> compressor(const PointDensity& density) {
  auto shared = std::make_shared<const Compander>(density);
  return [shared](double x) { return shared->compress(x); };
}

std::function<double(double)> expander(const PointDensity& density) {
  auto shared = std::make_shared<const Compander>(density);
  return [shared](double u) { return shared->expand(u); };
}

Quantizer build_quantizer(const PointDensity& density, int n_levels) {
  if (n_levels < 2) throw std::invalid_argument("build_quantizer: n_levels must be >= 2");
  const Compander comp(density);
  const double n = n_levels;
  Quantizer q;
  q.n_levels = n_levels;
  q.levels.resize(n_levels);
  q.boundaries.resize(n_levels + 1);
  q.boundaries.front() = density.support().lower;
  q.boundaries.back() = density.support().upper;
  for (int i = 1; i < n_levels; ++i) q.boundaries[i] = comp.expand(i / n);
  for (int i = 0; i < n_levels; ++i) q.levels[i] = comp.expand((i + 0.5) / n);
  for (int i = 0; i < n_levels; ++i) {
    if (!(q.boundaries[i] < q.levels[i] && q.levels[i] < q.boundaries[i + 1]))
      throw NumericalFailure("build_quantizer: levels do not interleave the boundaries");
  }
  return q;
}

double bennett_integral(const PointDensity& density, const SourceModel& source) {
  auto integrand = [&density, &source](double x) {
    const double f = source.pdf(x);
    // below ~1e-300 the mass cannot matter and lambda may underflow to 0
    if (f <= 1e-300) return 0.0;
    const double l = density(x);
    if (!(l > 0.0))
      throw NumericalFailure(
          "bennett_integral: density vanishes where the source has mass; the integral diverges");
    return f / (l * l);
  };
  return num::integrate(integrand, source.support(), 1e-10);
}

double density_second_moment(const PointDensity& density) {
  return num::integrate([&density](double x) { return x * x * density(x); }, density.support(),
                        1e-10);
}

double finite_n_mse(const Quantizer& quantizer, const SourceModel& source) {
  if (quantizer.n_levels < 1 ||
      quantizer.boundaries.size() != quantizer.levels.size() + 1)
    throw std::invalid_argument("finite_n_mse: malformed quantizer");
  double total = 0.0;
  for (int i = 0; i < quantizer.n_levels; ++i) {
    const double level = quantizer.levels[i];
    total += num::integrate(
        [&source, level](double x) {
          const double d = x - level;
          return d * d * source.pdf(x);
        },
        {quantizer.boundaries[i], quantizer.boundaries[i + 1]}, 1e-13);
  }
  return total;
}

}  // namespace edt
