#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "edt/errors.hpp"
#include "edt/simulator.hpp"

using namespace edt;

namespace {

bool bitwise_equal(const SimResult& a, const SimResult& b) {
  return std::memcmp(&a.mse, &b.mse, sizeof(double)) == 0 &&
         std::memcmp(&a.mse_given_outage, &b.mse_given_outage, sizeof(double)) == 0 &&
         std::memcmp(&a.mse_given_no_outage, &b.mse_given_no_outage, sizeof(double)) == 0 &&
         std::memcmp(&a.empirical_outage_rate, &b.empirical_outage_rate, sizeof(double)) == 0 &&
         a.n_outages == b.n_outages &&
         std::memcmp(&a.mse_std_error, &b.mse_std_error, sizeof(double)) == 0;
}

CompanderDesign uniform_uniform_design() {
  const SourceModel u = SourceModel::uniform();
  const PointDensity d = naive_point_density(u);
  return CompanderDesign{u, 2.0 / std::exp(0.0), 0.0, d, 0.0, 1.0 / 12.0};
}

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
};

}  // namespace

TEST_CASE("zero-energy binary chain over the uniform source") {
  // c = 2 makes N = 2 at gamma = 0; the exact outage probability is 1/2 and
  // the clean branch sees the two-cell midpoint quantizer.
  SimConfig cfg{uniform_uniform_design(), 0.0, 200000, 42, SimMode::FullChannel, 0};
  const SimResult r = run_simulation(cfg);
  CHECK(r.exact_outage_prob == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::fabs(r.empirical_outage_rate - 0.5) <= 4.0 * std::sqrt(0.25 / 200000.0));
  // clean-branch mse: 1/48 within Monte Carlo error
  CHECK(r.mse_given_no_outage == doctest::Approx(1.0 / 48.0).epsilon(0.02));
}

TEST_CASE("determinism: same seed, any thread count") {
  const CompanderDesign g = optimize_design(SourceModel::gaussian());
  SimConfig cfg{g, 36.0, 150000, 987654321, SimMode::FullChannel, 1};
  const SimResult r1 = run_simulation(cfg);
  cfg.n_threads = 4;
  const SimResult r4 = run_simulation(cfg);
  cfg.n_threads = 3;
  const SimResult r3 = run_simulation(cfg);
  CHECK(bitwise_equal(r1, r4));
  CHECK(bitwise_equal(r1, r3));
  // and a different seed actually changes the outcome
  cfg.seed = 1;
  CHECK(!bitwise_equal(r1, run_simulation(cfg)));
}

TEST_CASE("decomposition identity and outage-rate agreement") {
  const CompanderDesign g = optimize_design(SourceModel::gaussian());
  SimConfig cfg{g, 36.0, 400000, 2718, SimMode::FullChannel, 0};
  const SimResult r = run_simulation(cfg);
  CHECK(r.empirical_outage_rate >= 0.0);
  CHECK(r.empirical_outage_rate <= 1.0);
  const double recomposed = r.empirical_outage_rate * r.mse_given_outage +
                            (1.0 - r.empirical_outage_rate) * r.mse_given_no_outage;
  CHECK(recomposed == doctest::Approx(r.mse).epsilon(1e-14));
  const double se = std::sqrt(r.exact_outage_prob * (1.0 - r.exact_outage_prob) /
                              static_cast<double>(cfg.n_samples));
  CHECK(std::fabs(r.empirical_outage_rate - r.exact_outage_prob) <= 4.0 * se);
}

TEST_CASE("FullChannel and AnalyticOutage agree") {
  const CompanderDesign g = optimize_design(SourceModel::gaussian());
  SimConfig full{g, 36.0, 300000, 777, SimMode::FullChannel, 0};
  SimConfig analytic{g, 36.0, 300000, 778, SimMode::AnalyticOutage, 0};
  const SimResult rf = run_simulation(full);
  const SimResult ra = run_simulation(analytic);
  const double combined =
      std::sqrt(rf.mse_std_error * rf.mse_std_error + ra.mse_std_error * ra.mse_std_error);
  CHECK(std::fabs(rf.mse - ra.mse) <= 5.0 * combined);
}

TEST_CASE("simulated mse stays below the analytic bound") {
  const CompanderDesign g = optimize_design(SourceModel::gaussian());
  SimConfig cfg{g, 48.0, 400000, 31337, SimMode::FullChannel, 0};
  const SimResult r = run_simulation(cfg);
  CHECK(r.mse <= end_to_end_bound(g, 48.0) * 1.05 + 4.0 * r.mse_std_error);
}

TEST_CASE("max-sampling shortcut matches Phi(x)^k at quantiles") {
  // empirical cdf of m = Phi^{-1}(u^{1/k}) against Phi(x)^k within Kolmogorov bands
  const int n = 1000000;
  const double band = 1.95 / std::sqrt(static_cast<double>(n));  // alpha ~ 0.001
  for (const int k : {7, 152}) {
    SplitMix64 rng{static_cast<std::uint64_t>(k) * 1000003ULL};
    std::vector<double> probe;  // x such that Phi(x)^k = q for q in {.1,...,.9}
    for (const double q : {0.1, 0.3, 0.5, 0.7, 0.9})
      probe.push_back(num::std_normal_quantile(std::pow(q, 1.0 / k)));
    std::vector<int> below(probe.size(), 0);
    for (int i = 0; i < n; ++i) {
      const double tail = -std::expm1(std::log(rng.uniform()) / k);
      const double m = -num::std_normal_quantile(tail);
      for (std::size_t j = 0; j < probe.size(); ++j)
        if (m <= probe[j]) ++below[j];
    }
    const double qs[5] = {0.1, 0.3, 0.5, 0.7, 0.9};
    for (std::size_t j = 0; j < probe.size(); ++j)
      CHECK(std::fabs(static_cast<double>(below[j]) / n - qs[j]) <= band);
  }
}

TEST_CASE("wrong decoded index is uniform given an outage") {
  // N = 8 at gamma = 24; chi-square over the rank of the decoded index among
  // the 7 incorrect positions, threshold 22.46 (df 6, alpha 0.001).
  const CompanderDesign g = optimize_design(SourceModel::gaussian());
  REQUIRE(num_levels(g.c, 24.0) == 8);
  const Quantizer q = build_quantizer(g.density, 8);
  std::vector<double> interior(q.boundaries.begin() + 1, q.boundaries.end() - 1);

  SplitMix64 rng{20240817};
  const double sqrt_gamma = std::sqrt(24.0);
  std::vector<std::int64_t> counts(7, 0);
  std::int64_t outages = 0;
  for (int i = 0; i < 2000000; ++i) {
    const double x = num::std_normal_quantile(rng.uniform());
    const auto k = static_cast<std::int64_t>(
        std::upper_bound(interior.begin(), interior.end(), x) - interior.begin());
    const double z = num::std_normal_quantile(rng.uniform());
    const double tail = -std::expm1(std::log(rng.uniform()) / 7.0);
    const double m = -num::std_normal_quantile(tail);
    if (m > sqrt_gamma + z) {
      auto r = static_cast<std::int64_t>(rng.uniform() * 7.0);
      if (r > 6) r = 6;
      ++counts[static_cast<std::size_t>(r)];  // rank among the incorrect indices
      ++outages;
      (void)k;
    }
  }
  REQUIRE(outages > 1000);
  const double expected = static_cast<double>(outages) / 7.0;
  double chi2 = 0.0;
  for (const auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < 22.46);
}

TEST_CASE("conditional_outage_check: uniform two-level closed form") {
  SimConfig cfg{uniform_uniform_design(), 0.0, 300000, 5150, SimMode::FullChannel, 0};
  const OutageCheck chk = conditional_outage_check(cfg);
  // oracle: two-cell integral, E[(X - xhat_wrong)^2] = 1/12 + 1/16 + 1/8 = 13/48
  CHECK(std::fabs(chk.empirical - 13.0 / 48.0) <= 4.0 * chk.std_error + 1e-12);
  CHECK(chk.bound == doctest::Approx(2.0 * (1.0 / 12.0 + 1.0 / 16.0)).epsilon(1e-9));
  CHECK(chk.empirical <= chk.bound + 4.0 * chk.std_error);
}

TEST_CASE("conditional_outage_check: gaussian N=21 bound and N=1024 moment match") {
  const CompanderDesign g = optimize_design(SourceModel::gaussian());
  SimConfig small{g, 36.0, 400000, 808, SimMode::FullChannel, 0};
  const OutageCheck chk = conditional_outage_check(small);
  CHECK(chk.empirical <= chk.bound + 4.0 * chk.std_error);

  // discrete levels sample lambda: mean level^2 approaches int x^2 lambda
  const Quantizer q = build_quantizer(g.density, 1024);
  double mean_sq = 0.0;
  for (const double level : q.levels) mean_sq += level * level;
  mean_sq /= 1024.0;
  CHECK(std::fabs(mean_sq - g.density_second_moment) <= 0.02 * g.density_second_moment);
}

TEST_CASE("simulator error paths") {
  const CompanderDesign g = optimize_design(SourceModel::gaussian());
  SimConfig over_budget{g, 195.0, 1000, 1, SimMode::FullChannel, 0};
  CHECK_THROWS_AS(run_simulation(over_budget), ConfigError);
  SimConfig no_samples{g, 36.0, 0, 1, SimMode::FullChannel, 0};
  CHECK_THROWS_AS(run_simulation(no_samples), ConfigError);
  SimConfig few{g, 36.0, 500, 1, SimMode::FullChannel, 0};
  CHECK_THROWS_AS(conditional_outage_check(few), ConfigError);
}

TEST_CASE("sweep: record structure and bound dominance") {
  const std::vector<double> gammas{36.0, 42.0, 48.0};
  const auto records =
      sweep(SourceModel::gaussian(), DesignChoice::Optimized, gammas, 100000, 99, SimMode::FullChannel);
  REQUIRE(records.size() == 3);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SweepRecord& r = records[i];
    CHECK(r.bound_optimized < r.bound_naive);
    CHECK(r.pe_exact <= r.pe_bound);
    REQUIRE(r.sim_mse.has_value());
    CHECK(*r.sim_mse <= r.bound_optimized * 1.05 + 4.0 * *r.sim_stderr);
    REQUIRE(r.empirical_outage_rate.has_value());
    const double rate_se = std::sqrt(r.pe_exact * (1.0 - r.pe_exact) / 100000.0);
    CHECK(std::fabs(*r.empirical_outage_rate - r.pe_exact) <= 4.0 * rate_se);
    if (i > 0) {
      CHECK(r.gamma > records[i - 1].gamma);
      CHECK(r.n_levels >= records[i - 1].n_levels);
    }
  }
  // analytic-only sweep has empty simulation fields
  const auto analytic =
      sweep(SourceModel::gaussian(), DesignChoice::Optimized, gammas, 0, 99);
  CHECK(!analytic.front().sim_mse.has_value());
  CHECK_THROWS_AS(sweep(SourceModel::gaussian(), DesignChoice::Optimized, {48.0, 36.0}, 0, 1),
                  std::invalid_argument);
  // a simulated sweep over the level budget names the offending gamma
  try {
    sweep(SourceModel::gaussian(), DesignChoice::Optimized, {36.0, 240.0}, 1000, 1);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("240") != std::string::npos);
  }
}
