#include "wrs/variates.hpp"

#include <cmath>
#include <stdexcept>

namespace wrs {

double beta_tail_step(double u, std::uint64_t shape) {
  if (shape == 0) throw std::domain_error("beta_tail_step: shape must be >= 1");
  if (!(u >= 0.0 && u < 1.0))
    throw std::domain_error("beta_tail_step: u must lie in [0, 1)");
  if (shape == 1) return u;
  return -std::expm1(std::log1p(-u) / static_cast<double>(shape));
}

namespace {

// ln k! minus its Stirling approximation (k + 1/2) ln(k+1) - (k+1)
// + ln sqrt(2 pi); exact via lgamma for small k, asymptotic series above.
double stirling_tail(double k) {
  if (k < 10.0) {
    constexpr double half_log_two_pi = 0.91893853320467274178;
    return std::lgamma(k + 1.0) -
           ((k + 0.5) * std::log(k + 1.0) - (k + 1.0) + half_log_two_pi);
  }
  const double ik = 1.0 / (k + 1.0);
  const double ik2 = ik * ik;
  return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0) * ik2) * ik2) * ik;
}

// Sequential-search inversion from k = 0. One uniform draw; expected scan
// length is trials*p + 1, so callers keep trials*p small.
std::uint64_t binomial_inversion(std::uint64_t trials, double p,
                                 CountingRng& rng) {
  const double n = static_cast<double>(trials);
  const double odds = p / (1.0 - p);
  double pmf = std::exp(n * std::log1p(-p));
  double u = rng.next();
  std::uint64_t k = 0;
  while (u > pmf && k < trials) {
    u -= pmf;
    ++k;
    pmf *= odds * (n - static_cast<double>(k) + 1.0) / static_cast<double>(k);
  }
  return k;
}

// Hoermann's BTRD: transformed rejection with decomposition, for p <= 0.5
// and trials*p large. Expected uniforms per call is a small constant
// (below three) independent of the parameters.
std::uint64_t binomial_btrd(std::uint64_t trials, double p, CountingRng& rng) {
  const double n = static_cast<double>(trials);
  const double q = 1.0 - p;
  const double npq = n * p * q;
  const double sqrt_npq = std::sqrt(npq);

  const double b = 1.15 + 2.53 * sqrt_npq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = n * p + 0.5;
  const double alpha = (2.83 + 5.1 / b) * sqrt_npq;
  const double v_r = 0.92 - 4.2 / b;
  const double u_rv_r = 0.86 * v_r;
  const double r = p / q;
  const double nr = (n + 1.0) * r;
  const double m = std::floor((n + 1.0) * p);

  for (;;) {
    double v = rng.next();
    double u;
    if (v <= u_rv_r) {
      u = v / v_r - 0.43;
      const double us = 0.5 - std::fabs(u);
      return static_cast<std::uint64_t>(
          std::floor((2.0 * a / us + b) * u + c));
    }
    if (v >= v_r) {
      u = rng.next() - 0.5;
    } else {
      u = v / v_r - 0.93;
      u = (u < 0.0 ? -0.5 : 0.5) - u;
      v = rng.next() * v_r;
    }
    const double us = 0.5 - std::fabs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + c);
    if (kd < 0.0 || kd > n) continue;
    v = v * alpha / (a / (us * us) + b);
    const double km = std::fabs(kd - m);

    if (km <= 15.0) {
      // Evaluate the pmf ratio f(k)/f(m) by recurrence.
      double f = 1.0;
      if (m < kd) {
        for (double i = m + 1.0; i <= kd; i += 1.0) f *= nr / i - r;
      } else if (m > kd) {
        for (double i = kd + 1.0; i <= m; i += 1.0) v *= nr / i - r;
      }
      if (v <= f) return static_cast<std::uint64_t>(kd);
      continue;
    }

    // Squeeze, then full log acceptance test.
    v = std::log(v);
    const double rho =
        (km / npq) * (((km / 3.0 + 0.625) * km + 1.0 / 6.0) / npq + 0.5);
    const double t = -km * km / (2.0 * npq);
    if (v < t - rho) return static_cast<std::uint64_t>(kd);
    if (v > t + rho) continue;

    const double nm = n - m + 1.0;
    const double h = (m + 0.5) * std::log((m + 1.0) / (r * nm)) +
                     stirling_tail(m) + stirling_tail(n - m);
    const double nk = n - kd + 1.0;
    const double accept =
        h + (n + 1.0) * std::log(nm / nk) +
        (kd + 0.5) * std::log(nk * r / (kd + 1.0)) - stirling_tail(kd) -
        stirling_tail(n - kd);
    if (v <= accept) return static_cast<std::uint64_t>(kd);
  }
}

}  // namespace

std::uint64_t binomial_draw(std::uint64_t trials, double p, CountingRng& rng) {
  if (!(p >= -kProbClampTolerance && p <= 1.0 + kProbClampTolerance))
    throw std::domain_error("binomial_draw: p outside [-tol, 1+tol]");
  if (p < 0.0) p = 0.0;
  if (p > 1.0) p = 1.0;
  if (trials == 0) return 0;

  const bool flipped = p > 0.5;
  const double ps = flipped ? 1.0 - p : p;
  std::uint64_t k;
  if (static_cast<double>(trials) * ps <= 30.0) {
    k = binomial_inversion(trials, ps, rng);
  } else {
    k = binomial_btrd(trials, ps, rng);
  }
  return flipped ? trials - k : k;
}

}  // namespace wrs
