#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "edt/analysis.hpp"

namespace edt {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// The distortion bound splits into a quantization term A(b) 2^{-2b} and an
// error term C(b) 2^{b rho - (gamma/(2 ln2)) rho/(rho+1)}.
double quant_coeff(int bits) {
  const double bln2 = bits * kLn2;
  return 1.0 / std::sqrt(2.0 * M_PI * bln2) + 4.0 * bln2;
}

double error_coeff(int bits) {
  const double bln2 = bits * kLn2;
  return 16.0 * bln2 + (16.0 * bln2 + 1.0) / std::sqrt(2.0 * M_PI * bln2) * std::exp2(-2.0 * bits);
}

}  // namespace

KnoppParams::KnoppParams(int bits_in, double rho_in)
    : bits(bits_in), rho(rho_in), delta(2.0 * std::sqrt(bits_in * kLn2)) {
  if (bits < 2) throw std::invalid_argument("KnoppParams: bits must be >= 2");
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("KnoppParams: rho must lie in [0, 1]");
}

double knopp_distortion_bound(double gamma, const KnoppParams& params) {
  if (!(gamma > 0.0)) throw std::invalid_argument("knopp_distortion_bound: gamma must be positive");
  const double exponent =
      params.bits * params.rho - gamma / (2.0 * kLn2) * (params.rho / (params.rho + 1.0));
  return std::exp2(-2.0 * params.bits) * quant_coeff(params.bits) +
         std::exp2(exponent) * error_coeff(params.bits);
}

std::pair<KnoppParams, double> knopp_optimize(double gamma, int b_cap) {
  if (!(gamma > 0.0)) throw std::invalid_argument("knopp_optimize: gamma must be positive");
  b_cap = std::clamp(b_cap, 2, 4096);

  std::vector<double> quant(b_cap + 1), err(b_cap + 1);
  for (int b = 2; b <= b_cap; ++b) {
    quant[b] = std::exp2(-2.0 * b) * quant_coeff(b);
    err[b] = error_coeff(b);
  }

  constexpr int kRhoPoints = 1024;
  int best_b = 2;
  double best_rho = 0.0;
  double best_val = std::numeric_limits<double>::infinity();
  auto scan = [&](double rho_lo, double rho_hi) {
    for (int i = 0; i < kRhoPoints; ++i) {
      const double rho = rho_lo + (rho_hi - rho_lo) * i / (kRhoPoints - 1);
      const double gk = gamma / (2.0 * kLn2) * (rho / (rho + 1.0));
      for (int b = 2; b <= b_cap; ++b) {
        const double v = quant[b] + std::exp2(b * rho - gk) * err[b];
        if (v < best_val) {
          best_val = v;
          best_b = b;
          best_rho = rho;
        }
      }
    }
  };
  scan(0.0, 1.0);
  const double cell = 1.0 / (kRhoPoints - 1);
  scan(std::max(0.0, best_rho - cell), std::min(1.0, best_rho + cell));
  return {KnoppParams(best_b, best_rho), best_val};
}

double knopp_analytic_bound(double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("knopp_analytic_bound: gamma must be positive");
  const double eg = std::exp(-gamma / 6.0);
  return eg * (std::sqrt(6.0 / (M_PI * gamma)) * (1.0 + eg * (4.0 * gamma / 3.0 + 1.0)) +
               5.0 * gamma / 3.0);
}

KnoppExponent knopp_exponent() {
  // For fixed rho the two exponents equalize at b' ln2 = rho/(2(rho+1)(rho+2)),
  // leaving theta(rho) = rho/((rho+1)(rho+2)) to maximize over [0, 1].
  auto theta = [](double rho) { return rho / ((rho + 1.0) * (rho + 2.0)); };
  const auto res = num::minimize_scalar([&theta](double rho) { return -theta(rho); }, {0.0, 1.0}, 1e-9);
  const double rho = res.argmin;
  return {rho / (2.0 * kLn2 * (rho + 1.0) * (rho + 2.0)), rho, theta(rho)};
}

}  // namespace edt
