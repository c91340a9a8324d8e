#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "wrs/counting_rng.hpp"
#include "wrs/kahan.hpp"
#include "wrs/sample_sink.hpp"
#include "wrs/weight_stream.hpp"

namespace wrs {

// Weighted random sampling with replacement: draw s elements from a
// discrete distribution given by a weight list or stream. All samplers
// produce the same distribution (s iid categorical draws, reported as
// multiplicities); they differ in cost profile.
//
// A position x in [0, 1) selects the element whose cumulative-sum interval
// (S_{i-1}, S_i] contains it; elements of zero width are never selected.

struct HybridConfig {
  // Switch point on the expected number of samples landing in the current
  // element: below theta the sampler advances landing by landing, at or
  // above it one binomial draw consumes the whole element.
  double theta = 1.0;
  // Hard cap on consecutive landings inside one element; the next step is
  // forced to the binomial branch once the cap is hit.
  std::uint32_t beta_run_limit = 16;
};

// Complete walk state of the adaptive sampler. The driver allocates
// nothing else per element, which is what keeps auxiliary memory constant
// over arbitrarily long streams.
struct HybridCursor {
  double current_position = 0.0;
  std::uint64_t remaining = 0;
  std::uint64_t index = 0;
  KahanAccumulator cum_prob;
  std::uint32_t beta_run = 0;
};

// Cumulative-sum table plus one binary search per draw. O(n) memory,
// O(n + s log n) time, exactly s uniform draws.
SampleCounts sample_naive(std::span<const double> weights, std::uint64_t s,
                          CountingRng& rng);

// Sorts s uniforms and merges them against the running cumulative sum in
// one forward pass. O(s) memory, exactly s uniform draws.
SampleCounts sample_sorted_uniforms(std::span<const double> weights,
                                    std::uint64_t s, CountingRng& rng);

// Generates the s sorted positions directly: each step advances by a
// Beta(1, remaining)-distributed fraction of the leftover segment, so no
// sort and no stored sample are needed. Exactly s uniform draws, one
// emission per landing, constant auxiliary memory.
void sample_online_beta(WeightStream& stream, std::uint64_t s,
                        CountingRng& rng, SampleSink& sink);

// Walks the elements in order; element i receives a Binomial(remaining,
// p_i / (1 - consumed)) share. At most one binomial variate per element,
// constant auxiliary memory, stops as soon as all s samples are placed.
void sample_conditional_binomial(WeightStream& stream, std::uint64_t s,
                                 CountingRng& rng, SampleSink& sink);

// Adaptive combination of the two stream samplers: per element it takes
// whichever step is cheaper, individual landings (expected occupancy below
// config.theta) or one binomial for the whole element. O(min(n, s) + s)
// work overall with O(min(n, s)) RNG variates and constant auxiliary
// state (HybridCursor).
void sample_hybrid(WeightStream& stream, std::uint64_t s, CountingRng& rng,
                   SampleSink& sink, const HybridConfig& config = {});

// Name <-> sampler mapping shared by the CLI, the verification suite and
// the tests. "alias" is the table-based baseline from alias_table.hpp.
enum class SamplerKind { naive, sorted, beta, binom, hybrid, alias };

const char* to_string(SamplerKind kind);
std::optional<SamplerKind> parse_sampler(const std::string& name);

// Runs any sampler over a finite weight vector into dense counts.
std::vector<std::uint64_t> run_dense(SamplerKind kind,
                                     std::span<const double> weights,
                                     std::uint64_t s, CountingRng& rng);

}  // namespace wrs
