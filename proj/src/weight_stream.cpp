#include "wrs/weight_stream.hpp"

#include <cmath>

#include "wrs/kahan.hpp"
#include "wrs/variates.hpp"

namespace wrs {

ListWeightStream::ListWeightStream(std::span<const double> weights,
                                   std::optional<double> total, bool validate)
    : weights_(weights) {
  if (total) {
    if (!(*total > 0.0))
      throw std::invalid_argument("weight list total must be positive");
    scale_ = 1.0 / *total;
  }
  if (!validate) return;
  KahanAccumulator sum;
  for (double w : weights_) {
    if (!(w >= 0.0))
      throw std::domain_error("weights must be nonnegative");
    sum.add(w);
  }
  if (!total && !weights_.empty() &&
      std::fabs(sum.value() - 1.0) > kProbClampTolerance) {
    throw std::invalid_argument(
        "weight list must sum to 1 (pass total for unnormalized weights)");
  }
}

std::optional<double> ListWeightStream::next() {
  if (pos_ >= weights_.size()) return std::nullopt;
  return weights_[pos_++] * scale_;
}

GeneratorWeightStream::GeneratorWeightStream(
    std::function<double(std::uint64_t)> fn)
    : fn_(std::move(fn)) {
  if (!fn_) throw std::invalid_argument("generator stream needs a function");
}

std::optional<double> GeneratorWeightStream::next() { return fn_(pos_++); }

ListWeightStream stream_from_list(std::span<const double> weights,
                                  std::optional<double> total) {
  return ListWeightStream(weights, total);
}

GeneratorWeightStream stream_from_generator(
    std::function<double(std::uint64_t)> fn) {
  return GeneratorWeightStream(std::move(fn));
}

}  // namespace wrs
