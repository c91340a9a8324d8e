#include "wrs/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wrs/alias_table.hpp"
#include "wrs/variates.hpp"

namespace wrs {

namespace {

constexpr double kTol = kProbClampTolerance;

// Forward scan over a stream, tracking the current element and its right
// boundary (written through to caller-owned storage so the hybrid walk
// can expose them as part of its cursor). Zero-width elements are skipped
// while loading: they own no part of the segment and must never be
// selected, so `index` always names a positive-width element once loaded.
struct ElementScan {
  WeightStream& stream;
  KahanAccumulator& cum;
  std::uint64_t& index;
  bool loaded = false;
  bool exhausted = false;

  // Pull forward to the next positive-width element.
  bool load_next() {
    if (exhausted) return false;
    std::uint64_t next_index = loaded ? index + 1 : 0;
    for (;;) {
      const std::optional<double> w = stream.next();
      if (!w) {
        exhausted = true;
        return false;
      }
      if (!(*w >= 0.0))
        throw std::domain_error("weight stream produced a negative weight");
      if (*w > 0.0) {
        cum.add(*w);
        index = next_index;
        loaded = true;
        return true;
      }
      ++next_index;
    }
  }

  // Move to the element containing position x: the first one whose right
  // boundary reaches x (position 0 and boundary positions resolve to the
  // next positive-width element). Returns false when the stream ran out
  // within tolerance of x, leaving the scan on the last real element;
  // throws StreamUnderflowError on a larger shortfall.
  bool land(double x) {
    while (!loaded || cum.value() < x) {
      if (!load_next()) {
        if (loaded && x - cum.value() <= kTol) return false;
        throw StreamUnderflowError(
            "weight stream exhausted before covering a sample position");
      }
    }
    return true;
  }
};

// Validation shared by the list-based samplers. Returns the index of the
// last positive weight.
std::size_t check_weight_vector(std::span<const double> weights) {
  KahanAccumulator sum;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.0)) throw std::domain_error("weights must be nonnegative");
    if (w > 0.0) last_positive = i;
    sum.add(w);
  }
  if (std::fabs(sum.value() - 1.0) > kTol)
    throw std::invalid_argument("weights must sum to 1");
  return last_positive;
}

}  // namespace

SampleCounts sample_naive(std::span<const double> weights, std::uint64_t s,
                          CountingRng& rng) {
  if (weights.empty() && s == 0) return SampleCounts::make_dense(0);
  const std::size_t last_positive = check_weight_vector(weights);

  std::vector<double> bounds;
  bounds.reserve(weights.size());
  KahanAccumulator cum;
  for (double w : weights) {
    cum.add(w);
    bounds.push_back(cum.value());
  }

  SampleCounts counts = SampleCounts::make_dense(weights.size());
  for (std::uint64_t k = 0; k < s; ++k) {
    const double u = rng.next();
    std::size_t i;
    if (u > 0.0) {
      i = static_cast<std::size_t>(
          std::lower_bound(bounds.begin(), bounds.end(), u) - bounds.begin());
      // The final boundary can sit below u by normalization slack.
      if (i == bounds.size()) i = last_positive;
    } else {
      i = static_cast<std::size_t>(
          std::upper_bound(bounds.begin(), bounds.end(), 0.0) - bounds.begin());
    }
    counts.add(i, 1);
  }
  return counts;
}

SampleCounts sample_sorted_uniforms(std::span<const double> weights,
                                    std::uint64_t s, CountingRng& rng) {
  if (weights.empty() && s == 0) return SampleCounts::make_dense(0);
  check_weight_vector(weights);

  std::vector<double> positions(s);
  for (double& x : positions) x = rng.next();
  std::sort(positions.begin(), positions.end());

  SampleCounts counts = SampleCounts::make_dense(weights.size());
  ListWeightStream list(weights, std::nullopt, false);
  KahanAccumulator cum;
  std::uint64_t index = 0;
  ElementScan scan{list, cum, index};
  for (double x : positions) {
    scan.land(x);
    counts.add(index, 1);
  }
  return counts;
}

void sample_online_beta(WeightStream& stream, std::uint64_t s,
                        CountingRng& rng, SampleSink& sink) {
  if (s == 0) return;
  KahanAccumulator cum;
  std::uint64_t index = 0;
  ElementScan scan{stream, cum, index};
  double position = 0.0;
  for (std::uint64_t left = s; left > 0; --left) {
    position += beta_tail_step(rng.next(), left) * (1.0 - position);
    scan.land(position);
    sink.accept(index, 1);
  }
}

void sample_conditional_binomial(WeightStream& stream, std::uint64_t s,
                                 CountingRng& rng, SampleSink& sink) {
  if (s == 0) return;
  std::uint64_t remaining = s;
  KahanAccumulator consumed;
  bool any_positive = false;
  std::uint64_t last_index = 0;
  std::uint64_t index = 0;
  for (;;) {
    const std::optional<double> w = stream.next();
    if (!w) {
      if (any_positive && 1.0 - consumed.value() <= kTol) {
        sink.accept(last_index, remaining);
        return;
      }
      throw StreamUnderflowError(
          "weight stream exhausted with samples remaining");
    }
    if (!(*w >= 0.0))
      throw std::domain_error("weight stream produced a negative weight");
    if (*w > 0.0) {
      const double denom = 1.0 - consumed.value();
      if (*w > denom + kTol)
        throw std::domain_error(
            "conditional probability overran 1: stream mass exceeds total");
      const double p = *w >= denom ? 1.0 : *w / denom;
      const std::uint64_t here = binomial_draw(remaining, p, rng);
      if (here > 0) {
        sink.accept(index, here);
        remaining -= here;
        if (remaining == 0) return;
      }
      consumed.add(*w);
      any_positive = true;
      last_index = index;
    }
    ++index;
  }
}

void sample_hybrid(WeightStream& stream, std::uint64_t s, CountingRng& rng,
                   SampleSink& sink, const HybridConfig& config) {
  if (!(config.theta > 0.0))
    throw std::invalid_argument("hybrid theta must be positive");
  if (config.beta_run_limit == 0)
    throw std::invalid_argument("hybrid beta_run_limit must be >= 1");
  if (s == 0) return;

  HybridCursor cur;
  cur.remaining = s;
  ElementScan scan{stream, cur.cum_prob, cur.index};
  if (!scan.load_next())
    throw StreamUnderflowError("weight stream is empty with samples remaining");

  for (;;) {
    const double denom = 1.0 - cur.current_position;
    if (denom <= 0.0) {
      // Walked to (or past) the segment end: whatever is left lands here.
      sink.accept(cur.index, cur.remaining);
      return;
    }
    const double span = cur.cum_prob.value() - cur.current_position;
    const double occupancy =
        span * static_cast<double>(cur.remaining) / denom;

    if (occupancy < config.theta && cur.beta_run < config.beta_run_limit) {
      const double u = rng.next();
      const std::uint64_t at = cur.index;
      cur.current_position += beta_tail_step(u, cur.remaining) * denom;
      if (!scan.land(cur.current_position)) {
        // Stream done within tolerance: the residual zone belongs to the
        // last element, and so does every remaining sample.
        sink.accept(cur.index, cur.remaining);
        return;
      }
      if (cur.index != at) cur.beta_run = 0;
      sink.accept(cur.index, 1);
      ++cur.beta_run;
      if (--cur.remaining == 0) return;
    } else {
      if (span > denom + kTol)
        throw std::domain_error(
            "cumulative probability overran 1: stream mass exceeds total");
      const double p = span >= denom ? 1.0 : (span > 0.0 ? span / denom : 0.0);
      const std::uint64_t here = binomial_draw(cur.remaining, p, rng);
      if (here > 0) {
        sink.accept(cur.index, here);
        cur.remaining -= here;
        if (cur.remaining == 0) return;
      }
      cur.current_position = cur.cum_prob.value();
      if (!scan.load_next()) {
        if (1.0 - cur.cum_prob.value() <= kTol) {
          sink.accept(cur.index, cur.remaining);
          return;
        }
        throw StreamUnderflowError(
            "weight stream exhausted with samples remaining");
      }
      cur.beta_run = 0;
    }
  }
}

const char* to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::naive: return "naive";
    case SamplerKind::sorted: return "sorted";
    case SamplerKind::beta: return "beta";
    case SamplerKind::binom: return "binom";
    case SamplerKind::hybrid: return "hybrid";
    case SamplerKind::alias: return "alias";
  }
  return "?";
}

std::optional<SamplerKind> parse_sampler(const std::string& name) {
  for (SamplerKind k : {SamplerKind::naive, SamplerKind::sorted,
                        SamplerKind::beta, SamplerKind::binom,
                        SamplerKind::hybrid, SamplerKind::alias}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

std::vector<std::uint64_t> run_dense(SamplerKind kind,
                                     std::span<const double> weights,
                                     std::uint64_t s, CountingRng& rng) {
  switch (kind) {
    case SamplerKind::naive:
      return sample_naive(weights, s, rng).dense_counts();
    case SamplerKind::sorted:
      return sample_sorted_uniforms(weights, s, rng).dense_counts();
    case SamplerKind::beta: {
      ListWeightStream stream(weights);
      DenseCountSink sink(weights.size());
      sample_online_beta(stream, s, rng, sink);
      return sink.counts().dense_counts();
    }
    case SamplerKind::binom: {
      ListWeightStream stream(weights);
      DenseCountSink sink(weights.size());
      sample_conditional_binomial(stream, s, rng, sink);
      return sink.counts().dense_counts();
    }
    case SamplerKind::hybrid: {
      ListWeightStream stream(weights);
      DenseCountSink sink(weights.size());
      sample_hybrid(stream, s, rng, sink);
      return sink.counts().dense_counts();
    }
    case SamplerKind::alias: {
      const AliasTable table = alias_build(weights);
      std::vector<std::uint64_t> counts(weights.size(), 0);
      for (std::uint64_t k = 0; k < s; ++k) ++counts[alias_draw(table, rng)];
      return counts;
    }
  }
  throw std::logic_error("unknown sampler kind");
}

}  // namespace wrs
