#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wrs/counting_rng.hpp"

namespace wrs {

// Benchmark weight populations.
//
//  - uniform: n iid draws from (0, 1)
//  - geometric: w_k = r^k with r chosen so the last weight is 1e-100
//    times the first (n = 1 degenerates to {1})
//  - gaussian: standard normal density at n evenly spaced points on
//    [0, 10] inclusive
//
// gen_population normalizes to sum 1 and shuffles; both the uniform draws
// and the shuffle consume the same seeded generator, so a spec pins the
// population exactly.
enum class PopulationKind { uniform, geometric, gaussian };

struct PopulationSpec {
  PopulationKind kind = PopulationKind::uniform;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

// Raw weights before normalization and shuffling; rng is consumed only by
// the uniform kind.
std::vector<double> population_weights(PopulationKind kind, std::uint64_t n,
                                       CountingRng& rng);

std::vector<double> gen_population(const PopulationSpec& spec);

const char* to_string(PopulationKind kind);
std::optional<PopulationKind> parse_population(const std::string& name);

}  // namespace wrs
