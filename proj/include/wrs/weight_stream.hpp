#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>

namespace wrs {

// Thrown when a weight stream ends while samples are still owed and the
// missing probability mass exceeds the clamp tolerance.
class StreamUnderflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One-way producer of element probabilities, in index order. Finite
// sources keep returning nullopt after exhaustion. Implementations hold
// state independent of how far the stream has been driven.
class WeightStream {
 public:
  virtual ~WeightStream() = default;
  virtual std::optional<double> next() = 0;
};

// Stream over a finite list. Non-owning: the span must outlive the stream.
//
// Without `total` the weights must already sum to 1 (within tolerance).
// With `total`, the effective probability of element i is weights[i]/total.
// `validate` controls the construction-time scan (negative weights, sum
// check); callers that have already validated may skip it.
class ListWeightStream final : public WeightStream {
 public:
  explicit ListWeightStream(std::span<const double> weights,
                            std::optional<double> total = std::nullopt,
                            bool validate = true);

  std::optional<double> next() override;

 private:
  std::span<const double> weights_;
  double scale_ = 1.0;
  std::size_t pos_ = 0;
};

// Infinite stream defined by index -> probability. Never exhausts; holds
// only the cursor.
class GeneratorWeightStream final : public WeightStream {
 public:
  explicit GeneratorWeightStream(std::function<double(std::uint64_t)> fn);

  std::optional<double> next() override;

 private:
  std::function<double(std::uint64_t)> fn_;
  std::uint64_t pos_ = 0;
};

ListWeightStream stream_from_list(std::span<const double> weights,
                                  std::optional<double> total = std::nullopt);
GeneratorWeightStream stream_from_generator(std::function<double(std::uint64_t)> fn);

}  // namespace wrs
