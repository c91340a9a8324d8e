#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "wrs/alias_table.hpp"
#include "wrs/counting_rng.hpp"

using wrs::AliasTable;
using wrs::CountingRng;

namespace {

// Reconstructs the probability each index is returned: its own slot's
// acceptance share plus every slot that aliases to it.
std::vector<double> effective_probabilities(const AliasTable& table) {
  const std::size_t n = table.size();
  std::vector<double> p(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] += table.prob[i] / static_cast<double>(n);
    if (table.prob[i] < 1.0)
      p[table.alias[i]] += (1.0 - table.prob[i]) / static_cast<double>(n);
  }
  return p;
}

}  // namespace

TEST_CASE("alias table for a single element") {
  const std::vector<double> w = {1.0};
  const AliasTable table = wrs::alias_build(w);
  REQUIRE(table.size() == 1);
  CHECK(table.prob[0] == 1.0);
  CHECK(table.alias[0] == 0);
}

TEST_CASE("alias table for equal weights needs no aliases") {
  const std::vector<double> w = {0.5, 0.5};
  const AliasTable table = wrs::alias_build(w);
  REQUIRE(table.size() == 2);
  CHECK(table.prob[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(table.prob[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("alias table reproduces the target distribution exactly") {
  std::vector<std::vector<double>> cases = {{0.2, 0.3, 0.5}};
  CountingRng gen(1234);
  for (std::size_t n : {2, 3, 5, 17, 50}) {
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& x : w) {
      do {
        x = gen.next();
      } while (x == 0.0);
      sum += x;
    }
    for (double& x : w) x /= sum;
    cases.push_back(std::move(w));
  }
  for (const auto& w : cases) {
    const AliasTable table = wrs::alias_build(w);
    const std::vector<double> p = effective_probabilities(table);
    REQUIRE(p.size() == w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      CAPTURE(w.size());
      CAPTURE(i);
      CHECK(p[i] == doctest::Approx(w[i]).epsilon(1e-12));
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(table.prob[i] >= 0.0);
      CHECK(table.prob[i] <= 1.0);
      CHECK(table.alias[i] < w.size());
    }
  }
}

TEST_CASE("alias draw consumes exactly two uniforms") {
  const std::vector<double> w = {0.2, 0.3, 0.5};
  const AliasTable table = wrs::alias_build(w);
  CountingRng rng(7);
  for (int i = 1; i <= 100; ++i) {
    (void)wrs::alias_draw(table, rng);
    CHECK(rng.draws() == static_cast<std::uint64_t>(2 * i));
  }
}

TEST_CASE("alias draw frequencies match a fair coin") {
  const std::vector<double> w = {0.5, 0.5};
  const AliasTable table = wrs::alias_build(w);
  CountingRng rng(42);
  const std::uint64_t trials = 100000;
  std::uint64_t ones = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const std::uint64_t idx = wrs::alias_draw(table, rng);
    REQUIRE(idx < 2);
    ones += idx;
  }
  const double freq = static_cast<double>(ones) / static_cast<double>(trials);
  // Four standard deviations of a fair Bernoulli mean at this sample size.
  CHECK(std::abs(freq - 0.5) < 0.006324555320336758);
}

TEST_CASE("alias build validates input") {
  const std::vector<double> empty;
  CHECK_THROWS_AS(wrs::alias_build(empty), std::invalid_argument);
  const std::vector<double> negative = {0.6, -0.1, 0.5};
  CHECK_THROWS_AS(wrs::alias_build(negative), std::domain_error);
  const std::vector<double> short_sum = {0.25, 0.25};
  CHECK_THROWS_AS(wrs::alias_build(short_sum), std::invalid_argument);
}

TEST_CASE("zero-weight elements are unreachable in the alias table") {
  const std::vector<double> w = {0.5, 0.0, 0.5};
  const AliasTable table = wrs::alias_build(w);
  CHECK(table.prob[1] == 0.0);
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.prob[i] < 1.0) CHECK(table.alias[i] != 1);
  }
  CountingRng rng(3);
  for (int i = 0; i < 20000; ++i) CHECK(wrs::alias_draw(table, rng) != 1);
}
