#pragma once

#include <cstdint>
#include <vector>

namespace wrs {

// Uniform source shared by every sampler and variate generator in this
// library. Two modes:
//
//  - seeded: xoshiro256++ (Blackman & Vigna 2019), state initialized from
//    the 64-bit seed via splitmix64. The generator is part of the
//    compatibility contract: a given seed produces the same sequence on
//    every platform and in every future release.
//  - scripted: replays a caller-supplied list of values, for deterministic
//    tests. Drawing past the end throws std::logic_error.
//
// next() returns a double in [0, 1) carrying 53 random bits and increments
// the draw counter by exactly one. All randomness consumed anywhere in the
// library flows through this interface, so draws() doubles as an exact
// cost meter.
class CountingRng {
 public:
  explicit CountingRng(std::uint64_t seed);

  // Values must lie in [0, 1).
  static CountingRng scripted(std::vector<double> values);

  double next();

  std::uint64_t draws() const noexcept { return draws_; }
  bool is_scripted() const noexcept { return scripted_; }

 private:
  CountingRng() = default;

  bool scripted_ = false;
  std::uint64_t state_[4] = {};
  std::vector<double> script_;
  std::size_t script_pos_ = 0;
  std::uint64_t draws_ = 0;
};

// Integer uniform on {0, ..., bound-1} from a single draw. bound >= 1.
std::uint64_t uniform_index(CountingRng& rng, std::uint64_t bound);

}  // namespace wrs
