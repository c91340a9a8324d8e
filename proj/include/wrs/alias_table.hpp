#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wrs/counting_rng.hpp"

namespace wrs {

// Walker's alias method (Vose's O(n) construction). Each slot i holds an
// acceptance probability and a fallback element; a draw picks a slot
// uniformly and keeps it with probability prob[i], otherwise takes
// alias[i]. Mixture over slots reproduces the input distribution exactly.
struct AliasTable {
  std::vector<double> prob;
  std::vector<std::uint64_t> alias;

  std::size_t size() const noexcept { return prob.size(); }
};

// Weights must be nonnegative and sum to 1 within tolerance; at least one
// element required.
AliasTable alias_build(std::span<const double> weights);

// Exactly two uniform draws per sample.
std::uint64_t alias_draw(const AliasTable& table, CountingRng& rng);

}  // namespace wrs
