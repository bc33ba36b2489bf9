#include "edt/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "edt/errors.hpp"

namespace edt::cli {

namespace {

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

SourceModel parse_source(const std::string& name) {
  if (name == "gaussian") return SourceModel::gaussian();
  if (name == "uniform") return SourceModel::uniform();
  throw std::invalid_argument("unknown source '" + name + "' (expected gaussian or uniform)");
}

DesignChoice parse_design(const std::string& name) {
  if (name == "optimized") return DesignChoice::Optimized;
  if (name == "naive") return DesignChoice::Naive;
  throw std::invalid_argument("unknown design '" + name + "' (expected optimized or naive)");
}

SimMode parse_mode(const std::string& name) {
  if (name == "analytic") return SimMode::AnalyticOutage;
  if (name == "full") return SimMode::FullChannel;
  throw std::invalid_argument("unknown mode '" + name + "' (expected analytic or full)");
}

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> xs(points);
  for (int i = 0; i < points; ++i) xs[i] = lo + (hi - lo) * i / (points - 1);
  return xs;
}

}  // namespace

void cmd_design(const SourceModel& source, std::ostream& out) {
  const DispersionReport report = naive_design_report(source);
  const CompanderDesign opt = optimize_design(source);
  out << "source=" << source.name() << "\n";
  out << "c0=" << g12(c_max(source)) << "\n";
  out << "c_opt=" << g12(report.c_opt) << "\n";
  out << "beta_hat_opt=" << g12(report.beta_hat_opt) << "\n";
  out << "omega_opt=" << g12(report.omega_opt) << "\n";
  out << "dispersion=" << g12(report.dispersion_lower_bound) << "\n";
  out << "naive_omega=" << g12(report.naive_omega) << "\n";
  out << "naive_dispersion=" << g12(report.naive_dispersion) << "\n";
  out << "gap_db=" << g12(report.gap_db) << "\n";
  out << "density_second_moment=" << g12(opt.density_second_moment) << "\n";
}

namespace {

void validate_curve_grid(const SourceModel& source, const CurveOptions& opts, double& hi) {
  hi = opts.c_max.value_or(c_max(source));
  if (opts.points < 2) throw std::invalid_argument("curve: need at least 2 grid points");
  if (!(opts.c_min > 0.0) || !(opts.c_min < hi) || hi > c_max(source) * (1.0 + 1e-12))
    throw std::invalid_argument("curve: c grid must lie inside (0, c_max]");
}

}  // namespace

void cmd_beta_curve(const SourceModel& source, const CurveOptions& opts, std::ostream& out) {
  double hi = 0.0;
  validate_curve_grid(source, opts, hi);
  out << "c,beta_hat\n";
  for (const double c : linspace(opts.c_min, hi, opts.points))
    out << g12(c) << "," << g12(solve_beta_hat(source, c)) << "\n";
}

void cmd_omega_curve(const SourceModel& source, const CurveOptions& opts, std::ostream& out) {
  double hi = 0.0;
  validate_curve_grid(source, opts, hi);
  out << "c,omega\n";
  for (const double c : linspace(opts.c_min, hi, opts.points))
    out << g12(c) << "," << g12(omega(source, c)) << "\n";
}

void cmd_density(const SourceModel& source, const DensityOptions& opts, std::ostream& out) {
  const bool gauss = source.kind() == SourceKind::GaussianStdNormal;
  const double lo = opts.x_min.value_or(gauss ? -8.0 : -0.5);
  const double hi = opts.x_max.value_or(gauss ? 8.0 : 0.5);
  if (opts.points < 2 || !(lo < hi)) throw std::invalid_argument("density: bad x grid");
  const PointDensity optimized = optimize_design(source).density;
  const PointDensity naive = naive_design(source).density;
  out << "x,lambda_optimized,lambda_naive\n";
  for (const double x : linspace(lo, hi, opts.points))
    out << g12(x) << "," << g12(optimized(x)) << "," << g12(naive(x)) << "\n";
}

void cmd_sweep(const SourceModel& source, const SweepOptions& opts, std::ostream& out) {
  if (!(opts.gamma_step > 0.0) || !(opts.gamma_min <= opts.gamma_max))
    throw std::invalid_argument("sweep: bad gamma grid");
  if (opts.samples < 0) throw std::invalid_argument("sweep: samples must be >= 0");
  std::vector<double> gammas;
  for (double g = opts.gamma_min; g <= opts.gamma_max + 1e-9 * opts.gamma_step;
       g += opts.gamma_step)
    gammas.push_back(g);

  const auto records = sweep(source, opts.design, gammas, opts.samples, opts.seed, opts.mode);
  out << "gamma,n_levels,bound_optimized,bound_naive,knopp_numeric,knopp_analytic,"
         "sim_mse,sim_stderr,pe_exact,pe_bound,neg_ln_D\n";
  for (const SweepRecord& r : records) {
    const double selected =
        opts.design == DesignChoice::Optimized ? r.bound_optimized : r.bound_naive;
    out << g12(r.gamma) << "," << r.n_levels << "," << g12(r.bound_optimized) << ","
        << g12(r.bound_naive) << "," << g12(r.knopp_numeric) << "," << g12(r.knopp_analytic)
        << ",";
    if (r.sim_mse) out << g12(*r.sim_mse);
    out << ",";
    if (r.sim_stderr) out << g12(*r.sim_stderr);
    out << "," << g12(r.pe_exact) << "," << g12(r.pe_bound) << "," << g12(-std::log(selected))
        << "\n";
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"compander design and zero-delay coding analysis over AWGN"};
  app.require_subcommand(1);

  std::string source_name = "gaussian";
  std::string design_name = "optimized";
  std::string mode_name = "full";
  std::string out_path;

  CurveOptions curve;
  double c_max_flag = -1.0;
  DensityOptions density;
  double x_min_flag = 0.0, x_max_flag = 0.0;
  SweepOptions sw;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--source", source_name, "source distribution: gaussian|uniform");
    cmd->add_option("--out", out_path, "output file (default: stdout)");
  };

  CLI::App* design_cmd = app.add_subcommand("design", "print the headline design constants");
  add_common(design_cmd);

  CLI::App* beta_cmd = app.add_subcommand("beta-curve", "CSV of beta_hat(c)");
  add_common(beta_cmd);
  beta_cmd->add_option("--c-min", curve.c_min, "lowest c");
  beta_cmd->add_option("--c-max", c_max_flag, "highest c (default: c_max of the source)");
  beta_cmd->add_option("--c-points", curve.points, "grid size");

  CLI::App* omega_cmd = app.add_subcommand("omega-curve", "CSV of Omega(c)");
  add_common(omega_cmd);
  omega_cmd->add_option("--c-min", curve.c_min, "lowest c");
  omega_cmd->add_option("--c-max", c_max_flag, "highest c (default: c_max of the source)");
  omega_cmd->add_option("--c-points", curve.points, "grid size");

  CLI::App* density_cmd =
      app.add_subcommand("density", "CSV of the optimized and naive point densities");
  add_common(density_cmd);
  auto* xmin_opt = density_cmd->add_option("--x-min", x_min_flag, "lowest x");
  auto* xmax_opt = density_cmd->add_option("--x-max", x_max_flag, "highest x");
  density_cmd->add_option("--x-points", density.points, "grid size");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "CSV of bounds and simulated MSE over ENR");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--design", design_name, "which design to simulate: optimized|naive");
  sweep_cmd->add_option("--gamma-min", sw.gamma_min, "lowest ENR");
  sweep_cmd->add_option("--gamma-max", sw.gamma_max, "highest ENR");
  sweep_cmd->add_option("--gamma-step", sw.gamma_step, "ENR step");
  sweep_cmd->add_option("--samples", sw.samples, "Monte Carlo samples per row (0 = analytic only)");
  sweep_cmd->add_option("--seed", sw.seed, "master seed");
  sweep_cmd->add_option("--mode", mode_name, "channel mode: analytic|full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const SourceModel source = parse_source(source_name);
    std::ofstream file;
    std::ostream* sink = &out;
    if (!out_path.empty()) {
      file.open(out_path, std::ios::binary);
      if (!file) throw ConfigError("cannot open output file '" + out_path + "'");
      sink = &file;
    }
    if (design_cmd->parsed()) {
      cmd_design(source, *sink);
    } else if (beta_cmd->parsed() || omega_cmd->parsed()) {
      if (c_max_flag > 0.0) curve.c_max = c_max_flag;
      if (beta_cmd->parsed())
        cmd_beta_curve(source, curve, *sink);
      else
        cmd_omega_curve(source, curve, *sink);
    } else if (density_cmd->parsed()) {
      if (xmin_opt->count() > 0) density.x_min = x_min_flag;
      if (xmax_opt->count() > 0) density.x_max = x_max_flag;
      cmd_density(source, density, *sink);
    } else if (sweep_cmd->parsed()) {
      sw.design = parse_design(design_name);
      sw.mode = parse_mode(mode_name);
      cmd_sweep(source, sw, *sink);
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 4;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace edt::cli
