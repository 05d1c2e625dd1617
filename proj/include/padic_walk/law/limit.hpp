#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "padic_walk/core/ball.hpp"
#include "padic_walk/core/padic_value.hpp"
#include "padic_walk/core/prime.hpp"
#include "padic_walk/law/series.hpp"

namespace padic {

/// The heat-kernel multiplier e^(-sigma t |y|^b).
inline double limit_charfn(const PrimeParams& params, double t, AbsValue abs_y) {
  if (!(t >= 0.0)) throw std::domain_error("limit_charfn: t must be nonnegative");
  if (abs_y.is_zero()) return 1.0;
  return std::exp(-params.sigma * t * params.pow_b(abs_y.exponent()));
}

namespace detail {

/// log(e^(-s p^(kb)) - e^(-s p^((k+1)b))); -inf when the difference underflows.
inline double log_kernel_step(const PrimeParams& prm, double s, int k) {
  const double pk = prm.pow_b(k);
  if (!std::isfinite(pk)) return -std::numeric_limits<double>::infinity();
  const double gap = s * pk * (prm.pow_b(1.0) - 1.0);
  return -s * pk + std::log(-std::expm1(-gap));
}

}  // namespace detail

/// Density of Y_t at a point with |x| = abs_x:
///   rho(t, x) = sum_k p^k (e^(-sigma t p^(kb)) - e^(-sigma t p^((k+1)b))) 1{|x| <= p^(-k)}.
/// The returned tail bound covers both truncated ends of the series; the
/// lower end is cut at relative accuracy tol.
inline SeriesValue limit_density(const PrimeParams& params, double t, AbsValue abs_x,
                                 double tol = 1e-15) {
  if (!(t > 0.0)) throw std::domain_error("limit_density: t must be positive");
  const double s = params.sigma * t;
  const double L = params.log_p();
  const double pb = params.pow_b(1.0);
  CompensatedSum sum;
  double upper_tail = 0.0;

  int k_top = abs_x.is_zero() ? 0 : -abs_x.exponent();
  if (abs_x.is_zero()) {
    // Terms with k > 0: p^k D_k <= p^k E_k and the ratio of consecutive E-bounds
    // is at most r = p e^(-s p^(kb) (p^b - 1)) once that is below one.
    for (int k = 1;; ++k) {
      const double log_term = k * L + detail::log_kernel_step(params, s, k);
      const double term = std::exp(log_term);
      sum.add(term);
      const double pk = params.pow_b(k);
      const double log_bound = k * L - s * pk;  // log(p^k E_k)
      const double r = std::exp(L - s * pk * (pb - 1.0));
      if (r < 0.5 && std::exp(log_bound) * r / (1.0 - r) <= tol * 0.5) {
        upper_tail = std::exp(log_bound) * r / (1.0 - r);
        break;
      }
      if (k > 100000) throw std::runtime_error("limit_density: upper series did not converge");
    }
  }

  // Terms with k <= k_top, descending. For k < K the remainder is bounded by
  // s (p^b - 1) sum_{k < K} p^(k(1+b)).
  double lower_tail = 0.0;
  const double ratio = std::exp(-(1.0 + params.b) * L);
  for (int k = k_top;; --k) {
    const double lk = detail::log_kernel_step(params, s, k);
    if (std::isfinite(lk)) sum.add(std::exp(k * L + lk));
    lower_tail = s * (pb - 1.0) * std::exp((k - 1) * (1.0 + params.b) * L) / (1.0 - ratio);
    // Relative stop: far out the density itself is far below tol.
    if (lower_tail <= tol * 0.5 * std::max(sum.value(), 1e-300)) break;
    if (k_top - k > 100000) throw std::runtime_error("limit_density: lower series did not converge");
  }
  return {sum.value(), upper_tail + lower_tail};
}

inline SeriesValue limit_density(const PrimeParams& params, double t, const PadicValue& x,
                                 double tol = 1e-15) {
  return limit_density(params, t, x.abs(), tol);
}

/// P(|Y_t| <= p^j) = (1 - 1/p) sum_{s >= 0} p^(-s) e^(-sigma t p^(-(j+s) b)).
inline SeriesValue ball_prob_limit(const PrimeParams& params, double t, int radius_exponent,
                                   double tol = 1e-15) {
  if (!(t > 0.0)) throw std::domain_error("ball_prob_limit: t must be positive");
  const double p = params.p;
  const double st = params.sigma * t;
  CompensatedSum sum;
  double weight = 1.0 - 1.0 / p;
  double tail = 1.0;
  for (int s = 0;; ++s) {
    sum.add(weight * std::exp(-st * params.pow_b(-(radius_exponent + s))));
    weight /= p;
    tail /= p;  // sum of the remaining weights
    if (tail <= tol) break;
  }
  return {sum.value(), tail};
}

/// As above for a ball given explicitly; the ball must contain 0.
inline SeriesValue ball_prob_limit(const PrimeParams& params, double t, const Ball& ball,
                                   double tol = 1e-15) {
  if (!ball.contains_zero()) {
    throw std::invalid_argument("ball_prob_limit: ball does not contain 0; use cylinder_prob_exact");
  }
  return ball_prob_limit(params, t, ball.radius_exponent, tol);
}

}  // namespace padic
