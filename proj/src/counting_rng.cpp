#include "wrs/counting_rng.hpp"

#include <stdexcept>

namespace wrs {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

CountingRng::CountingRng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : state_) word = splitmix64(sm);
}

CountingRng CountingRng::scripted(std::vector<double> values) {
  for (double v : values) {
    if (!(v >= 0.0 && v < 1.0))
      throw std::invalid_argument("scripted rng values must lie in [0, 1)");
  }
  CountingRng rng;
  rng.scripted_ = true;
  rng.script_ = std::move(values);
  return rng;
}

double CountingRng::next() {
  if (scripted_) {
    if (script_pos_ >= script_.size())
      throw std::logic_error("scripted rng exhausted");
    ++draws_;
    return script_[script_pos_++];
  }
  // xoshiro256++
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  ++draws_;
  // Top 53 bits -> [0, 1) on the 2^-53 grid.
  return static_cast<double>(result >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_index(CountingRng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::domain_error("uniform_index: bound must be >= 1");
  std::uint64_t i = static_cast<std::uint64_t>(rng.next() * static_cast<double>(bound));
  if (i >= bound) i = bound - 1;
  return i;
}

}  // namespace wrs
