#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "doctest.h"
#include "wrs/counting_rng.hpp"
#include "wrs/mass_sample.hpp"
#include "wrs/stats.hpp"
#include "wrs/weight_stream.hpp"

using wrs::CountingRng;
using wrs::DijkstraWalker;
using wrs::UnimodalWalker;

namespace {

using Cell = std::pair<int, int>;

struct CellHash {
  std::size_t operator()(const Cell& c) const {
    return std::hash<long long>()(
        (static_cast<long long>(c.first) << 32) ^
        static_cast<long long>(static_cast<unsigned>(c.second)));
  }
};

double binomial_pmf(int n, double p, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0) + k * std::log(p) +
                  (n - k) * std::log1p(-p));
}

}  // namespace

TEST_CASE("unimodal walker enumerates a point mass once") {
  UnimodalWalker walker([](std::int64_t k) { return k == 7 ? 1.0 : 0.0; }, 7);
  auto first = walker.next();
  REQUIRE(first.has_value());
  CHECK(first->first == 7);
  CHECK(first->second == 1.0);
  CHECK_FALSE(walker.next().has_value());
  CHECK_FALSE(walker.next().has_value());
}

TEST_CASE("unimodal walker breaks mass ties toward the lower value") {
  auto pmf = [](std::int64_t k) {
    if (k == 0 || k == 2) return 0.25;
    if (k == 1) return 0.5;
    return 0.0;
  };
  UnimodalWalker walker(pmf, 1);
  std::vector<std::int64_t> order;
  while (auto v = walker.next()) order.push_back(v->first);
  CHECK(order == std::vector<std::int64_t>{1, 0, 2});
}

TEST_CASE("unimodal walker emits the Poisson(4) support heaviest-first") {
  UnimodalWalker walker(
      [](std::int64_t k) { return wrs::poisson_pmf(k, 4.0); }, 4);
  const std::vector<std::int64_t> want_values = {4, 3, 5, 2, 6, 1};
  const std::vector<double> want_masses = {
      0.1953668148131647,  0.19536681481316445, 0.15629345185053156,
      0.14652511110987348, 0.10419563456702093, 0.07326255555493673,
  };
  for (std::size_t i = 0; i < want_values.size(); ++i) {
    auto v = walker.next();
    REQUIRE(v.has_value());
    CHECK(v->first == want_values[i]);
    CHECK(v->second == doctest::Approx(want_masses[i]).epsilon(1e-13));
  }
}

TEST_CASE("unimodal walker exhausts a finite support") {
  const std::vector<double> w = {0.4, 0.3, 0.2, 0.1};
  auto pmf = [&](std::int64_t k) {
    return (k >= 0 && k < static_cast<std::int64_t>(w.size()))
               ? w[static_cast<std::size_t>(k)]
               : 0.0;
  };
  UnimodalWalker walker(pmf, 0);
  std::vector<std::int64_t> order;
  while (auto v = walker.next()) order.push_back(v->first);
  CHECK(order == std::vector<std::int64_t>{0, 1, 2, 3});
}

TEST_CASE("unimodal walker rejects a dead mode") {
  CHECK_THROWS_AS(UnimodalWalker([](std::int64_t) { return 0.0; }, 3),
                  std::domain_error);
}

TEST_CASE("best-first walker on a line matches the unimodal walker") {
  UnimodalWalker reference(
      [](std::int64_t k) { return wrs::poisson_pmf(k, 4.0); }, 4);
  DijkstraWalker<std::int64_t> walker(
      [](const std::int64_t& k) { return wrs::poisson_pmf(k, 4.0); },
      [](const std::int64_t& k) {
        return std::vector<std::int64_t>{k - 1, k + 1};
      },
      4);
  for (int i = 0; i < 20; ++i) {
    auto a = reference.next();
    auto b = walker.next();
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->first == b->first);
    CHECK(a->second == b->second);
  }
}

TEST_CASE("best-first walker covers a 2-d grid in nonincreasing mass order") {
  auto pmf = [](const Cell& c) {
    return binomial_pmf(9, 0.35, c.first) * binomial_pmf(9, 0.35, c.second);
  };
  auto neighbors = [](const Cell& c) {
    return std::vector<Cell>{{c.first - 1, c.second},
                             {c.first + 1, c.second},
                             {c.first, c.second - 1},
                             {c.first, c.second + 1}};
  };
  DijkstraWalker<Cell, CellHash> walker(pmf, neighbors, Cell{3, 3});
  std::vector<Cell> seen;
  double prev_mass = std::numeric_limits<double>::infinity();
  double total = 0.0;
  while (auto v = walker.next()) {
    CHECK(v->second <= prev_mass * (1.0 + 1e-12));
    prev_mass = v->second;
    total += v->second;
    seen.push_back(v->first);
  }
  REQUIRE(seen.size() == 100);
  std::sort(seen.begin(), seen.end());
  bool is_full_grid = true;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      if (seen[static_cast<std::size_t>(i * 10 + j)] != Cell{i, j})
        is_full_grid = false;
  CHECK(is_full_grid);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mass sampling a point mass takes one pull and one variate") {
  UnimodalWalker walker([](std::int64_t k) { return k == 7 ? 1.0 : 0.0; }, 7);
  CountingRng rng(1);
  std::vector<std::pair<std::int64_t, std::uint64_t>> out;
  const std::uint64_t pulls = wrs::mass_sample<std::int64_t>(
      walker, 1000000, rng,
      [&](const std::int64_t& v, std::uint64_t c) { out.emplace_back(v, c); });
  CHECK(pulls == 1);
  CHECK(rng.draws() == 1);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == std::pair<std::int64_t, std::uint64_t>{7, 1000000});
}

TEST_CASE("mass sampling a fair coin is unbiased") {
  auto pmf = [](std::int64_t k) { return (k == 0 || k == 1) ? 0.5 : 0.0; };
  UnimodalWalker walker(pmf, 0);
  CountingRng rng(12);
  std::uint64_t ones = 0;
  wrs::mass_sample<std::int64_t>(
      walker, 1000000, rng, [&](const std::int64_t& v, std::uint64_t c) {
        if (v == 1) ones += c;
      });
  // Four standard deviations of Binomial(1e6, 1/2).
  CHECK(ones > 500000 - 2000);
  CHECK(ones < 500000 + 2000);
}

TEST_CASE("mass sampling Poisson(100) matches its moments on a short window") {
  UnimodalWalker walker(
      [](std::int64_t k) { return wrs::poisson_pmf(k, 100.0); }, 100);
  CountingRng rng(5);
  const std::uint64_t s = 200000;
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t pulls = wrs::mass_sample<std::int64_t>(
      walker, s, rng, [&](const std::int64_t& v, std::uint64_t c) {
        n += c;
        const double x = static_cast<double>(v);
        const double delta = x - mean;
        mean += delta * static_cast<double>(c) / static_cast<double>(n);
        m2 += delta * static_cast<double>(c) * (x - mean);
      });
  REQUIRE(n == s);
  const double variance = m2 / static_cast<double>(n - 1);
  CHECK(std::abs(mean - 100.0) < 0.08944271909999159);
  CHECK(variance > 95.0);
  CHECK(variance < 105.0);
  CHECK(pulls < 300);
}

TEST_CASE("mass sample collect returns unique values covering all draws") {
  UnimodalWalker walker(
      [](std::int64_t k) { return wrs::poisson_pmf(k, 4.0); }, 4);
  CountingRng rng(9);
  const auto pairs = wrs::mass_sample_collect<std::int64_t>(walker, 3000, rng);
  std::uint64_t total = 0;
  std::vector<std::int64_t> values;
  for (const auto& [v, c] : pairs) {
    CHECK(c > 0);
    total += c;
    values.push_back(v);
  }
  CHECK(total == 3000);
  std::sort(values.begin(), values.end());
  CHECK(std::adjacent_find(values.begin(), values.end()) == values.end());
}

TEST_CASE("mass sampling a defective distribution underflows") {
  UnimodalWalker walker([](std::int64_t k) { return k == 0 ? 0.3 : 0.0; }, 0);
  CountingRng rng(2);
  CHECK_THROWS_AS(wrs::mass_sample<std::int64_t>(
                      walker, 10, rng, [](const std::int64_t&, std::uint64_t) {}),
                  wrs::StreamUnderflowError);
}

TEST_CASE("shuffle handles trivial sequences") {
  CountingRng rng(1);
  std::vector<int> empty;
  wrs::fisher_yates_shuffle(empty, rng);
  CHECK(empty.empty());
  std::vector<int> one = {42};
  wrs::fisher_yates_shuffle(one, rng);
  CHECK(one == std::vector<int>{42});
  CHECK(rng.draws() == 0);
}

TEST_CASE("shuffle is uniform over all permutations of four elements") {
  CountingRng rng(77);
  const int replicates = 100000;
  std::map<int, std::uint64_t> histogram;
  bool multiset_ok = true;
  for (int r = 0; r < replicates; ++r) {
    std::vector<int> v = {0, 1, 2, 3};
    wrs::fisher_yates_shuffle(v, rng);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::vector<int>{0, 1, 2, 3}) multiset_ok = false;
    histogram[v[0] * 64 + v[1] * 16 + v[2] * 4 + v[3]] += 1;
  }
  CHECK(multiset_ok);
  CHECK(rng.draws() == static_cast<std::uint64_t>(replicates) * 3);
  REQUIRE(histogram.size() == 24);
  std::vector<double> observed;
  for (const auto& [code, count] : histogram)
    observed.push_back(static_cast<double>(count));
  const std::vector<double> expected(24, replicates / 24.0);
  const auto stat = wrs::chi_square_stat(observed, expected);
  CHECK(wrs::chi_square_pvalue(stat.statistic, stat.dof) > 0.001);
}

TEST_CASE("poisson pmf helper") {
  CHECK(wrs::poisson_pmf(-1, 4.0) == 0.0);
  CHECK(wrs::poisson_pmf(0, 4.0) ==
        doctest::Approx(0.01831563888873418).epsilon(1e-14));
  CHECK(wrs::poisson_log_pmf(-2, 10.0) ==
        -std::numeric_limits<double>::infinity());
}
