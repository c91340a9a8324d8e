#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wrs/counting_rng.hpp"

namespace wrs {

// Log of the multinomial pmf at `counts` under category probabilities
// `weights`. Zero-probability categories contribute -inf unless their
// count is zero. Evaluated in log space; safe for large totals.
double multinomial_log_pmf(std::span<const std::uint64_t> counts,
                           std::span<const double> weights);
double multinomial_exact_pmf(std::span<const std::uint64_t> counts,
                             std::span<const double> weights);

// All count vectors of length n summing to s, in lexicographic order.
std::vector<std::vector<std::uint64_t>> enumerate_compositions(std::uint64_t s,
                                                               std::size_t n);
// Number of such vectors, C(s+n-1, n-1).
double composition_count(std::uint64_t s, std::size_t n);

struct ChiSquareStat {
  double statistic = 0.0;
  std::uint64_t dof = 0;  // bins - 1
};

// Pearson statistic. Every expected value must be positive; pool first.
ChiSquareStat chi_square_stat(std::span<const double> observed,
                              std::span<const double> expected);

struct PooledBins {
  std::vector<double> observed;
  std::vector<double> expected;
  std::uint64_t bins_pooled = 0;  // original bins merged away
};

// Merges every bin with expected < min_expected into one overflow bin (a
// residual overflow bin that is itself still short gets folded into the
// smallest surviving bin). Order-free; for ordered supports see
// pool_tails.
PooledBins pool_small_bins(std::span<const double> observed,
                           std::span<const double> expected,
                           double min_expected = 5.0);

// Pooling for ordered (tail-decaying) supports: accumulates bins from the
// low and high ends inward until each pooled tail reaches min_expected.
PooledBins pool_tails(std::span<const double> observed,
                      std::span<const double> expected,
                      double min_expected = 5.0);

// Upper-tail p-value of the chi-square distribution with dof degrees of
// freedom: the regularized upper incomplete gamma Q(dof/2, statistic/2),
// via power series / continued fraction. Absolute error below 1e-8.
double chi_square_pvalue(double statistic, std::uint64_t dof);

// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

struct GofReport {
  double statistic = 0.0;
  std::uint64_t dof = 0;
  double p_value = 0.0;
  std::uint64_t bins_pooled = 0;
};

// A sampler under test: dense multiplicity vector for one run.
using DenseSamplerFn = std::function<std::vector<std::uint64_t>(
    std::span<const double> weights, std::uint64_t s, CountingRng& rng)>;

enum class GofMode { exact, marginal };

// Goodness-of-fit of a sampler against the multinomial law.
//
//  - exact: each replicate's full count vector is one observation; the
//    reference pmf is the exact multinomial over the enumerated outcome
//    space. Only viable for small outcome spaces; beyond the cap it
//    throws std::invalid_argument directing to marginal mode.
//  - marginal: per-element totals across replicates against expectations
//    replicates*s*p_i.
//
// Bins with expected < 5 are pooled before the statistic.
GofReport gof_multinomial(const DenseSamplerFn& sampler,
                          std::span<const double> weights, std::uint64_t s,
                          std::uint64_t replicates, CountingRng& rng,
                          GofMode mode = GofMode::exact);

}  // namespace wrs
