#pragma once

#include <cstdint>

#include "wrs/counting_rng.hpp"

namespace wrs {

// Probabilities computed by accumulation may overshoot their exact value
// by rounding noise. Values within this tolerance of a valid probability
// are clamped; anything further out is treated as a caller bug.
inline constexpr double kProbClampTolerance = 1e-9;

// Inverse CDF of Beta(1, shape) at u: the distribution of the minimum of
// `shape` iid uniforms on [0, 1]. Returns 1 - (1-u)^(1/shape), evaluated
// as -expm1(log1p(-u)/shape) so that precision survives large shapes.
// Requires u in [0, 1) and shape >= 1.
double beta_tail_step(double u, std::uint64_t shape);

// Binomial(trials, p) variate. p may stray into [-tol, 0) or (1, 1+tol]
// (tol = kProbClampTolerance) and is clamped to the nearest valid value;
// anything further out throws std::domain_error. Expected cost is O(1)
// uniform draws per call regardless of trials: sequential-search inversion
// when trials*min(p,1-p) <= 30, otherwise Hoermann's BTRD transformed
// rejection (J. Stat. Comput. Simul. 46, 1993).
std::uint64_t binomial_draw(std::uint64_t trials, double p, CountingRng& rng);

}  // namespace wrs
