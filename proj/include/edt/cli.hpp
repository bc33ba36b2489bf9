#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "edt/simulator.hpp"

namespace edt::cli {

struct CurveOptions {
  double c_min = 0.05;
  std::optional<double> c_max;  // defaults to the source's c_max
  int points = 64;
};

struct DensityOptions {
  std::optional<double> x_min;  // defaults: gaussian +-8, uniform +-1/2
  std::optional<double> x_max;
  int points = 401;
};

struct SweepOptions {
  DesignChoice design = DesignChoice::Optimized;
  double gamma_min = 24.0;
  double gamma_max = 96.0;
  double gamma_step = 12.0;
  std::int64_t samples = 0;  // 0 = analytic-only sweep
  std::uint64_t seed = 1;
  SimMode mode = SimMode::FullChannel;
};

/// Headline constants as machine-readable key=value lines.
void cmd_design(const SourceModel& source, std::ostream& out);

/// CSV (c, beta_hat) of the normalizing multiplier across c.
void cmd_beta_curve(const SourceModel& source, const CurveOptions& opts, std::ostream& out);

/// CSV (c, omega) of the distortion coefficient across c.
void cmd_omega_curve(const SourceModel& source, const CurveOptions& opts, std::ostream& out);

/// CSV (x, lambda_optimized, lambda_naive) of the two point densities.
void cmd_density(const SourceModel& source, const DensityOptions& opts, std::ostream& out);

/// CSV of SweepRecord rows over the ENR grid.
void cmd_sweep(const SourceModel& source, const SweepOptions& opts, std::ostream& out);

/// Full argv entry point. Exit codes: 0 success, 2 usage error, 3 numerical
/// failure, 4 configuration/budget error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace edt::cli
