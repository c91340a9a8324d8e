#include "wrs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "wrs/kahan.hpp"

namespace wrs {

double multinomial_log_pmf(std::span<const std::uint64_t> counts,
                           std::span<const double> weights) {
  if (counts.size() != weights.size())
    throw std::invalid_argument("counts and weights must have equal length");
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  double lp = std::lgamma(static_cast<double>(total) + 1.0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::uint64_t c = counts[i];
    if (c == 0) continue;
    const double p = weights[i];
    if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
    const double cd = static_cast<double>(c);
    lp += cd * std::log(p) - std::lgamma(cd + 1.0);
  }
  return lp;
}

double multinomial_exact_pmf(std::span<const std::uint64_t> counts,
                             std::span<const double> weights) {
  return std::exp(multinomial_log_pmf(counts, weights));
}

std::vector<std::vector<std::uint64_t>> enumerate_compositions(
    std::uint64_t s, std::size_t n) {
  std::vector<std::vector<std::uint64_t>> result;
  if (n == 0) {
    if (s == 0) result.push_back({});
    return result;
  }
  std::vector<std::uint64_t> current(n, 0);
  // Lexicographic recursion over the first n-1 slots; the last absorbs
  // the remainder.
  auto recurse = [&](auto&& self, std::size_t slot, std::uint64_t left) -> void {
    if (slot == n - 1) {
      current[slot] = left;
      result.push_back(current);
      return;
    }
    for (std::uint64_t c = 0; c <= left; ++c) {
      current[slot] = c;
      self(self, slot + 1, left - c);
    }
  };
  recurse(recurse, 0, s);
  return result;
}

double composition_count(std::uint64_t s, std::size_t n) {
  if (n == 0) return s == 0 ? 1.0 : 0.0;
  // C(s+n-1, n-1)
  double c = 1.0;
  for (std::uint64_t i = 1; i < n; ++i) {
    c *= static_cast<double>(s + i) / static_cast<double>(i);
  }
  return c;
}

ChiSquareStat chi_square_stat(std::span<const double> observed,
                              std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("observed/expected must be equal, nonempty");
  ChiSquareStat out;
  KahanAccumulator stat;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0))
      throw std::invalid_argument("expected counts must be positive; pool bins");
    const double d = observed[i] - expected[i];
    stat.add(d * d / expected[i]);
  }
  out.statistic = stat.value();
  out.dof = observed.size() - 1;
  return out;
}

PooledBins pool_small_bins(std::span<const double> observed,
                           std::span<const double> expected,
                           double min_expected) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("observed/expected must have equal length");
  PooledBins out;
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  std::uint64_t pooled_count = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] >= min_expected) {
      out.observed.push_back(observed[i]);
      out.expected.push_back(expected[i]);
    } else {
      pooled_obs += observed[i];
      pooled_exp += expected[i];
      ++pooled_count;
    }
  }
  if (pooled_count > 0) {
    out.bins_pooled = pooled_count;
    if (out.expected.empty() || pooled_exp >= min_expected) {
      if (pooled_exp > 0.0) {
        out.observed.push_back(pooled_obs);
        out.expected.push_back(pooled_exp);
      } else if (pooled_obs > 0.0 && !out.expected.empty()) {
        // Mass observed where none was expected: fold into the smallest
        // surviving bin so the statistic still reacts.
        const std::size_t at = static_cast<std::size_t>(
            std::min_element(out.expected.begin(), out.expected.end()) -
            out.expected.begin());
        out.observed[at] += pooled_obs;
      }
    } else {
      const std::size_t at = static_cast<std::size_t>(
          std::min_element(out.expected.begin(), out.expected.end()) -
          out.expected.begin());
      out.observed[at] += pooled_obs;
      out.expected[at] += pooled_exp;
    }
  }
  return out;
}

PooledBins pool_tails(std::span<const double> observed,
                      std::span<const double> expected,
                      double min_expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("observed/expected must be equal, nonempty");
  std::size_t lo = 0;
  std::size_t hi = observed.size();
  double lo_obs = 0.0, lo_exp = 0.0, hi_obs = 0.0, hi_exp = 0.0;
  std::uint64_t merged = 0;
  while (lo < hi && lo_exp + expected[lo] < min_expected) {
    lo_obs += observed[lo];
    lo_exp += expected[lo];
    ++lo;
    ++merged;
  }
  while (hi > lo && hi_exp + expected[hi - 1] < min_expected) {
    --hi;
    hi_obs += observed[hi];
    hi_exp += expected[hi];
    ++merged;
  }
  PooledBins out;
  out.bins_pooled = merged;
  if (lo < hi) {
    // Fold each tail into its nearest surviving bin.
    out.observed.assign(observed.begin() + lo, observed.begin() + hi);
    out.expected.assign(expected.begin() + lo, expected.begin() + hi);
    out.observed.front() += lo_obs;
    out.expected.front() += lo_exp;
    out.observed.back() += hi_obs;
    out.expected.back() += hi_exp;
  } else {
    out.observed.push_back(lo_obs + hi_obs);
    out.expected.push_back(lo_exp + hi_exp);
  }
  return out;
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0))
    throw std::domain_error("regularized_gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    // Lower series for P(a, x), then complement.
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 10000; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return 1.0 - sum * std::exp(log_prefix);
  }
  // Continued fraction for Q(a, x), modified Lentz.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-17) break;
  }
  return std::exp(log_prefix) * h;
}

double chi_square_pvalue(double statistic, std::uint64_t dof) {
  if (dof == 0) throw std::domain_error("chi_square_pvalue: dof must be >= 1");
  if (!(statistic >= 0.0))
    throw std::domain_error("chi_square_pvalue: statistic must be >= 0");
  return regularized_gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

namespace {

constexpr double kMaxExactOutcomes = 8192.0;

std::uint64_t pack_counts(std::span<const std::uint64_t> counts,
                          std::uint64_t base) {
  std::uint64_t key = 0;
  for (std::uint64_t c : counts) key = key * base + c;
  return key;
}

GofReport finish_report(const PooledBins& pooled) {
  GofReport report;
  report.bins_pooled = pooled.bins_pooled;
  if (pooled.observed.size() < 2) {
    // Degenerate single-outcome space: nothing to reject.
    report.statistic = 0.0;
    report.dof = 1;
    report.p_value = 1.0;
    return report;
  }
  const ChiSquareStat stat = chi_square_stat(pooled.observed, pooled.expected);
  report.statistic = stat.statistic;
  report.dof = std::max<std::uint64_t>(stat.dof, 1);
  report.p_value = chi_square_pvalue(report.statistic, report.dof);
  return report;
}

GofReport gof_exact(const DenseSamplerFn& sampler,
                    std::span<const double> weights, std::uint64_t s,
                    std::uint64_t replicates, CountingRng& rng) {
  const std::size_t n = weights.size();
  if (composition_count(s, n) > kMaxExactOutcomes)
    throw std::invalid_argument(
        "outcome space too large for exact mode; use marginal mode");
  const auto outcomes = enumerate_compositions(s, n);
  const std::uint64_t base = s + 1;

  std::unordered_map<std::uint64_t, std::size_t> slot_of;
  slot_of.reserve(outcomes.size());
  std::vector<double> expected(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    slot_of.emplace(pack_counts(outcomes[i], base), i);
    expected[i] = static_cast<double>(replicates) *
                  multinomial_exact_pmf(outcomes[i], weights);
  }

  std::vector<double> observed(outcomes.size(), 0.0);
  for (std::uint64_t r = 0; r < replicates; ++r) {
    const std::vector<std::uint64_t> counts = sampler(weights, s, rng);
    observed[slot_of.at(pack_counts(counts, base))] += 1.0;
  }
  return finish_report(pool_small_bins(observed, expected));
}

GofReport gof_marginal(const DenseSamplerFn& sampler,
                       std::span<const double> weights, std::uint64_t s,
                       std::uint64_t replicates, CountingRng& rng) {
  const std::size_t n = weights.size();
  std::vector<double> observed(n, 0.0);
  for (std::uint64_t r = 0; r < replicates; ++r) {
    const std::vector<std::uint64_t> counts = sampler(weights, s, rng);
    for (std::size_t i = 0; i < n; ++i)
      observed[i] += static_cast<double>(counts[i]);
  }
  const double draws =
      static_cast<double>(replicates) * static_cast<double>(s);
  std::vector<double> expected(n);
  for (std::size_t i = 0; i < n; ++i) expected[i] = draws * weights[i];
  return finish_report(pool_small_bins(observed, expected));
}

}  // namespace

GofReport gof_multinomial(const DenseSamplerFn& sampler,
                          std::span<const double> weights, std::uint64_t s,
                          std::uint64_t replicates, CountingRng& rng,
                          GofMode mode) {
  if (weights.empty()) throw std::invalid_argument("weights must be nonempty");
  if (replicates == 0) throw std::invalid_argument("need replicates >= 1");
  return mode == GofMode::exact
             ? gof_exact(sampler, weights, s, replicates, rng)
             : gof_marginal(sampler, weights, s, replicates, rng);
}

}  // namespace wrs
