#include "wrs/population.hpp"

#include <cmath>
#include <stdexcept>

#include "wrs/kahan.hpp"
#include "wrs/mass_sample.hpp"

namespace wrs {

std::vector<double> population_weights(PopulationKind kind, std::uint64_t n,
                                       CountingRng& rng) {
  std::vector<double> w;
  w.reserve(n);
  switch (kind) {
    case PopulationKind::uniform:
      for (std::uint64_t i = 0; i < n; ++i) {
        double u = rng.next();
        while (u == 0.0) u = rng.next();
        w.push_back(u);
      }
      break;
    case PopulationKind::geometric: {
      if (n == 1) {
        w.push_back(1.0);
        break;
      }
      const double denom = static_cast<double>(n - 1);
      for (std::uint64_t k = 0; k < n; ++k)
        w.push_back(std::pow(10.0, -100.0 * static_cast<double>(k) / denom));
      break;
    }
    case PopulationKind::gaussian: {
      constexpr double inv_sqrt_two_pi = 0.3989422804014326779;
      if (n == 1) {
        w.push_back(inv_sqrt_two_pi);
        break;
      }
      const double step = 10.0 / static_cast<double>(n - 1);
      for (std::uint64_t i = 0; i < n; ++i) {
        const double x = step * static_cast<double>(i);
        w.push_back(inv_sqrt_two_pi * std::exp(-0.5 * x * x));
      }
      break;
    }
    default:
      throw std::invalid_argument("unknown population kind");
  }
  return w;
}

std::vector<double> gen_population(const PopulationSpec& spec) {
  if (spec.n == 0)
    throw std::invalid_argument("population size must be at least 1");
  CountingRng rng(spec.seed);
  std::vector<double> w = population_weights(spec.kind, spec.n, rng);
  if (!w.empty()) {
    KahanAccumulator sum;
    for (double x : w) sum.add(x);
    const double scale = 1.0 / sum.value();
    for (double& x : w) x *= scale;
    fisher_yates_shuffle(w, rng);
  }
  return w;
}

const char* to_string(PopulationKind kind) {
  switch (kind) {
    case PopulationKind::uniform: return "uniform";
    case PopulationKind::geometric: return "geometric";
    case PopulationKind::gaussian: return "gaussian";
  }
  return "?";
}

std::optional<PopulationKind> parse_population(const std::string& name) {
  if (name == "uniform") return PopulationKind::uniform;
  if (name == "geometric") return PopulationKind::geometric;
  if (name == "gaussian") return PopulationKind::gaussian;
  return std::nullopt;
}

}  // namespace wrs
