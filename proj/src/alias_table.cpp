#include "wrs/alias_table.hpp"

#include <cmath>
#include <stdexcept>

#include "wrs/kahan.hpp"
#include "wrs/variates.hpp"

namespace wrs {

AliasTable alias_build(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0)
    throw std::invalid_argument("alias table needs at least one weight");

  KahanAccumulator sum;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::domain_error("weights must be nonnegative");
    sum.add(w);
  }
  if (std::fabs(sum.value() - 1.0) > kProbClampTolerance)
    throw std::invalid_argument("weights must sum to 1");

  AliasTable table;
  table.prob.assign(n, 0.0);
  table.alias.assign(n, 0);

  // Vose's worklist construction: pair each under-full slot with an
  // over-full element until everything levels out at 1/n.
  std::vector<double> scaled(n);
  const double scale = static_cast<double>(n) / sum.value();
  for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * scale;

  std::vector<std::uint64_t> small;
  std::vector<std::uint64_t> large;
  for (std::size_t i = 0; i < n; ++i) {
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::uint64_t s = small.back();
    small.pop_back();
    const std::uint64_t l = large.back();
    large.pop_back();
    table.prob[s] = scaled[s];
    table.alias[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (std::uint64_t i : large) {
    table.prob[i] = 1.0;
    table.alias[i] = i;
  }
  // Rounding can leave stragglers in the small list; they are full slots.
  for (std::uint64_t i : small) {
    table.prob[i] = 1.0;
    table.alias[i] = i;
  }
  return table;
}

std::uint64_t alias_draw(const AliasTable& table, CountingRng& rng) {
  const std::uint64_t i = uniform_index(rng, table.size());
  const double u = rng.next();
  return u < table.prob[i] ? i : table.alias[i];
}

}  // namespace wrs
