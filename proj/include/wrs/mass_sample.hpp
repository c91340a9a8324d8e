#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "wrs/counting_rng.hpp"
#include "wrs/sample_sink.hpp"
#include "wrs/samplers.hpp"
#include "wrs/weight_stream.hpp"

namespace wrs {

// Sampling from an arbitrary discrete distribution without materializing
// its support: an enumerator walks the support in (approximately)
// decreasing-mass order, the emitted masses form a weight stream, and the
// adaptive sampler consumes only as much of it as the sample actually
// needs. High-probability points come first, so the stream is typically
// abandoned after a small prefix.

// Produces (value, mass) pairs, each support point at most once, masses
// positive and summing to 1 over the full walk.
template <class V>
class PmfEnumerator {
 public:
  virtual ~PmfEnumerator() = default;
  virtual std::optional<std::pair<V, double>> next() = 0;
};

// Enumerator for unimodal integer distributions: starts at the mode and
// keeps two cursors marching outward, always emitting the heavier side
// first (ties resolve to the lower value). Once a side's pmf reaches zero
// it is exhausted for good, which is exactly the unimodal shape
// guarantee. Holds O(1) state; each pmf value is evaluated once.
class UnimodalWalker final : public PmfEnumerator<std::int64_t> {
 public:
  UnimodalWalker(std::function<double(std::int64_t)> pmf, std::int64_t mode)
      : pmf_(std::move(pmf)), mode_(mode) {
    mode_mass_ = pmf_(mode_);
    if (!(mode_mass_ > 0.0))
      throw std::domain_error("unimodal walker: pmf at mode must be positive");
  }

  std::optional<std::pair<std::int64_t, double>> next() override {
    if (!started_) {
      started_ = true;
      left_ = mode_ - 1;
      right_ = mode_ + 1;
      left_mass_ = pmf_(left_);
      right_mass_ = pmf_(right_);
      return std::pair{mode_, mode_mass_};
    }
    const bool left_live = left_mass_ > 0.0;
    const bool right_live = right_mass_ > 0.0;
    if (!left_live && !right_live) return std::nullopt;
    if (left_live && (!right_live || left_mass_ >= right_mass_)) {
      auto out = std::pair{left_, left_mass_};
      --left_;
      left_mass_ = pmf_(left_);
      return out;
    }
    auto out = std::pair{right_, right_mass_};
    ++right_;
    right_mass_ = pmf_(right_);
    return out;
  }

 private:
  std::function<double(std::int64_t)> pmf_;
  std::int64_t mode_;
  double mode_mass_ = 0.0;
  bool started_ = false;
  std::int64_t left_ = 0;
  std::int64_t right_ = 0;
  double left_mass_ = 0.0;
  double right_mass_ = 0.0;
};

// Best-first enumerator for multidimensional or irregular supports: a
// max-priority queue keyed on pmf, fed by a caller-supplied neighbor
// relation, with a visited set for deduplication. Ties pop in insertion
// order. The support must be connected under `neighbors` starting from
// `start`; zero-mass points are dropped without expansion.
template <class V, class Hash = std::hash<V>, class Eq = std::equal_to<V>>
class DijkstraWalker final : public PmfEnumerator<V> {
 public:
  DijkstraWalker(std::function<double(const V&)> pmf,
                 std::function<std::vector<V>(const V&)> neighbors, V start)
      : pmf_(std::move(pmf)), neighbors_(std::move(neighbors)) {
    push(start);
  }

  std::optional<std::pair<V, double>> next() override {
    while (!queue_.empty()) {
      Entry top = queue_.top();
      queue_.pop();
      if (!(top.mass > 0.0)) continue;
      for (const V& v : neighbors_(top.value)) push(v);
      return std::pair{std::move(top.value), top.mass};
    }
    return std::nullopt;
  }

 private:
  struct Entry {
    double mass;
    std::uint64_t seq;
    V value;
  };
  struct Lower {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.mass != b.mass) return a.mass < b.mass;
      return a.seq > b.seq;
    }
  };

  void push(const V& v) {
    if (!visited_.insert(v).second) return;
    queue_.push(Entry{pmf_(v), seq_++, v});
  }

  std::function<double(const V&)> pmf_;
  std::function<std::vector<V>(const V&)> neighbors_;
  std::priority_queue<Entry, std::vector<Entry>, Lower> queue_;
  std::unordered_set<V, Hash, Eq> visited_;
  std::uint64_t seq_ = 0;
};

// Draws s values from the distribution behind `enumerator` using the
// adaptive sampler, emitting (value, count) pairs in traversal order.
// Returns the number of support points actually pulled. The enumerator
// running dry with more than the clamp tolerance of mass missing throws
// StreamUnderflowError (via the sampler).
template <class V>
std::uint64_t mass_sample(PmfEnumerator<V>& enumerator, std::uint64_t s,
                          CountingRng& rng,
                          const std::function<void(const V&, std::uint64_t)>& out,
                          const HybridConfig& config = {}) {
  struct EnumeratorStream final : WeightStream {
    PmfEnumerator<V>& src;
    std::deque<V> window;      // values for indices [base, base + size)
    std::uint64_t base = 0;
    std::uint64_t pulls = 0;

    explicit EnumeratorStream(PmfEnumerator<V>& s) : src(s) {}
    std::optional<double> next() override {
      auto e = src.next();
      if (!e) return std::nullopt;
      window.push_back(std::move(e->first));
      ++pulls;
      return e->second;
    }
  };
  struct MapSink final : SampleSink {
    EnumeratorStream& stream;
    const std::function<void(const V&, std::uint64_t)>& out;

    MapSink(EnumeratorStream& s, const std::function<void(const V&, std::uint64_t)>& o)
        : stream(s), out(o) {}
    void accept(std::uint64_t index, std::uint64_t multiplicity) override {
      while (stream.base < index) {
        stream.window.pop_front();
        ++stream.base;
      }
      out(stream.window.front(), multiplicity);
    }
  };

  EnumeratorStream stream(enumerator);
  MapSink mapped(stream, out);
  {
    CoalescingSink coalesced(mapped);
    sample_hybrid(stream, s, rng, coalesced, config);
  }
  return stream.pulls;
}

template <class V>
std::vector<std::pair<V, std::uint64_t>> mass_sample_collect(
    PmfEnumerator<V>& enumerator, std::uint64_t s, CountingRng& rng,
    const HybridConfig& config = {}) {
  std::vector<std::pair<V, std::uint64_t>> result;
  std::function<void(const V&, std::uint64_t)> out =
      [&result](const V& v, std::uint64_t m) { result.emplace_back(v, m); };
  mass_sample<V>(enumerator, s, rng, out, config);
  return result;
}

// In-place Fisher-Yates shuffle; n-1 uniform draws.
template <class T>
void fisher_yates_shuffle(std::vector<T>& seq, CountingRng& rng) {
  for (std::size_t i = seq.size(); i > 1; --i) {
    const std::uint64_t j = uniform_index(rng, i);
    std::swap(seq[i - 1], seq[j]);
  }
}

// Poisson pmf in log space; stable for large lambda where factorials and
// powers overflow.
inline double poisson_log_pmf(std::int64_t k, double lambda) {
  if (k < 0) return -std::numeric_limits<double>::infinity();
  const double kd = static_cast<double>(k);
  return kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0);
}

inline double poisson_pmf(std::int64_t k, double lambda) {
  if (k < 0) return 0.0;
  return std::exp(poisson_log_pmf(k, lambda));
}

}  // namespace wrs
