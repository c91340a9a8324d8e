#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "wrs/counting_rng.hpp"
#include "wrs/stats.hpp"
#include "wrs/variates.hpp"

using wrs::beta_tail_step;
using wrs::binomial_draw;
using wrs::CountingRng;

TEST_CASE("beta_tail_step pins the closed-form anchor points") {
  CHECK(beta_tail_step(0.0, 7) == 0.0);
  CHECK(beta_tail_step(0.5, 1) == 0.5);
  // (1-0.9375)^(1/4) = 0.0625^0.25 = 0.5 and (1-0.75)^(1/2) = 0.5, exactly
  // representable all the way through.
  CHECK(beta_tail_step(0.9375, 4) == 0.5);
  CHECK(beta_tail_step(0.75, 2) == 0.5);
}

TEST_CASE("beta_tail_step rejects invalid arguments") {
  CHECK_THROWS_AS(beta_tail_step(0.5, 0), std::domain_error);
  CHECK_THROWS_AS(beta_tail_step(1.0, 3), std::domain_error);
  CHECK_THROWS_AS(beta_tail_step(-0.1, 3), std::domain_error);
  CHECK_THROWS_AS(beta_tail_step(std::nan(""), 3), std::domain_error);
}

TEST_CASE("beta_tail_step is monotone in u and nonincreasing in shape") {
  const std::uint64_t shapes[] = {1, 2, 3, 10, 137, 100000};
  for (std::uint64_t shape : shapes) {
    double prev = -1.0;
    for (int i = 0; i < 200; ++i) {
      const double u = i / 200.0;
      const double x = beta_tail_step(u, shape);
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
      CHECK(x > prev);
      prev = x;
    }
  }
  for (double u : {0.1, 0.5, 0.9, 0.999}) {
    double prev = 2.0;
    for (std::uint64_t shape : shapes) {
      const double x = beta_tail_step(u, shape);
      CHECK(x <= prev);
      prev = x;
    }
  }
}

namespace {

double ks_statistic_beta_tail(std::uint64_t shape, std::uint64_t seed,
                              std::size_t count) {
  CountingRng rng(seed);
  std::vector<double> xs(count);
  for (double& x : xs) x = beta_tail_step(rng.next(), shape);
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  const double n = static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    // CDF of Beta(1, shape): F(x) = 1 - (1-x)^shape.
    const double f = -std::expm1(static_cast<double>(shape) * std::log1p(-xs[i]));
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

}  // namespace

TEST_CASE("beta_tail_step empirical CDF passes Kolmogorov-Smirnov") {
  // Critical value at significance 0.001 for 1e5 observations:
  // 1.9495 / sqrt(1e5).
  const double d_crit = 0.006164779987778185;
  for (std::uint64_t shape : {1ull, 2ull, 10ull, 1000ull}) {
    int passed = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      if (ks_statistic_beta_tail(shape, seed, 100000) < d_crit) ++passed;
    }
    CHECK(passed >= 4);
  }
}

TEST_CASE("binomial_draw degenerate and clamp cases") {
  CountingRng rng(3);
  CHECK(binomial_draw(10, 0.0, rng) == 0);
  CHECK(binomial_draw(10, 1.0, rng) == 10);
  CHECK(binomial_draw(10, 1.0 + 1e-12, rng) == 10);
  CHECK(binomial_draw(10, -1e-12, rng) == 0);
  CHECK(binomial_draw(0, 0.5, rng) == 0);

  CHECK_THROWS_AS(binomial_draw(10, 1.0 + 1e-8, rng), std::domain_error);
  CHECK_THROWS_AS(binomial_draw(10, -1e-8, rng), std::domain_error);
  CHECK_THROWS_AS(binomial_draw(10, std::nan(""), rng), std::domain_error);
}

TEST_CASE("binomial_draw trials=0 consumes no randomness") {
  CountingRng rng = CountingRng::scripted({});
  CHECK(binomial_draw(0, 0.3, rng) == 0);
  CHECK(rng.draws() == 0);
}

TEST_CASE("degenerate p resolves with exactly one uniform") {
  CountingRng zero = CountingRng::scripted({0.3});
  CHECK(binomial_draw(5, 0.0, zero) == 0);
  CHECK(zero.draws() == 1);

  CountingRng one = CountingRng::scripted({0.3});
  CHECK(binomial_draw(1000000, 1.0, one) == 1000000);
  CHECK(one.draws() == 1);
}

TEST_CASE("binomial_draw mean matches the analytic value") {
  CountingRng rng(12345);
  const std::uint64_t reps = 100000;
  double sum = 0.0;
  for (std::uint64_t i = 0; i < reps; ++i)
    sum += static_cast<double>(binomial_draw(100, 0.3, rng));
  const double mean = sum / static_cast<double>(reps);
  // 4 sigma band: 30 +- 4*sqrt(100*0.3*0.7)/sqrt(1e5).
  CHECK(std::fabs(mean - 30.0) < 0.05796550698475775);
}

namespace {

// Exact pmf table over k = 0..kcap, tail remainder folded into the last
// bin. kcap covers the entire effective support.
std::vector<double> binomial_expected(std::uint64_t trials, double p,
                                      std::uint64_t kcap, double replicates) {
  const double n = static_cast<double>(trials);
  std::vector<double> expected(kcap + 1);
  double total = 0.0;
  for (std::uint64_t k = 0; k <= kcap; ++k) {
    const double kd = static_cast<double>(k);
    const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(kd + 1.0) -
                           std::lgamma(n - kd + 1.0) + kd * std::log(p) +
                           (n - kd) * std::log1p(-p);
    expected[k] = replicates * std::exp(log_pmf);
    total += expected[k];
  }
  expected[kcap] += std::max(0.0, replicates - total);
  return expected;
}

double binomial_gof_pvalue(std::uint64_t trials, double p, std::uint64_t seed,
                           std::uint64_t reps) {
  const double n = static_cast<double>(trials);
  const double mean = n * p;
  const double sigma = std::sqrt(n * p * (1.0 - p));
  const std::uint64_t kcap = static_cast<std::uint64_t>(
      std::min(n, std::ceil(mean + std::max(60.0 * sigma, 60.0))));

  std::vector<double> observed(kcap + 1, 0.0);
  CountingRng rng(seed);
  for (std::uint64_t i = 0; i < reps; ++i) {
    const std::uint64_t k = std::min(binomial_draw(trials, p, rng), kcap);
    observed[k] += 1.0;
  }
  const std::vector<double> expected =
      binomial_expected(trials, p, kcap, static_cast<double>(reps));
  const wrs::PooledBins pooled = wrs::pool_tails(observed, expected);
  const wrs::ChiSquareStat stat =
      wrs::chi_square_stat(pooled.observed, pooled.expected);
  return wrs::chi_square_pvalue(stat.statistic, std::max<std::uint64_t>(stat.dof, 1));
}

}  // namespace

TEST_CASE("binomial_draw passes GOF against the exact pmf") {
  const std::pair<std::uint64_t, double> cases[] = {
      {5, 0.5},      {100, 0.03}, {1000000, 1e-5},
      {30, 0.999},   {1000, 0.3}, {400, 0.5},
  };
  for (const auto& [trials, p] : cases) {
    int passed = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      if (binomial_gof_pvalue(trials, p, seed, 100000) > 0.001) ++passed;
    }
    INFO("trials=", trials, " p=", p);
    CHECK(passed >= 4);
  }
}

TEST_CASE("binomial_draw expected uniform cost stays constant") {
  const std::pair<std::uint64_t, double> cases[] = {
      {5, 0.5},           {100, 0.03},     {1000000, 1e-5},
      {30, 0.999},        {1000, 0.3},     {400, 0.5},
      {1000000000, 0.5},  {1000000000, 0.0001},
  };
  for (const auto& [trials, p] : cases) {
    CountingRng rng(99);
    const std::uint64_t calls = 10000;
    for (std::uint64_t i = 0; i < calls; ++i) binomial_draw(trials, p, rng);
    const double avg =
        static_cast<double>(rng.draws()) / static_cast<double>(calls);
    INFO("trials=", trials, " p=", p, " avg=", avg);
    CHECK(avg <= 32.0);
  }
}
