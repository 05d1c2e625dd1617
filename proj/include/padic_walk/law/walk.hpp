#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "padic_walk/law/generator.hpp"
#include "padic_walk/law/radial_law.hpp"
#include "padic_walk/law/series.hpp"

namespace padic {

namespace detail {

/// The sequence c_i = (1 - alpha p^(-ib))^n and its increments
/// Delta_i = c_i - c_(i-1), evaluated without cancellation for large i.
class WalkSeries {
 public:
  WalkSeries(const GeneratorLaw& law, std::int64_t n)
      : law_(law), n_(static_cast<double>(n)), log_p_(law.params().log_p()),
        pb_minus_1_(law.params().pow_b(1.0) - 1.0) {
    if (n < 0) throw std::domain_error("walk: step count must be >= 0");
  }

  [[nodiscard]] double x(int i) const { return law_.alpha() * law_.params().pow_b(-i); }

  [[nodiscard]] double c(int i) const {
    if (i == 0) return std::pow(1.0 - law_.alpha(), n_);
    return std::exp(n_ * std::log1p(-x(i)));
  }

  /// 1 - c_i for i >= 1.
  [[nodiscard]] double one_minus_c(int i) const { return -std::expm1(n_ * std::log1p(-x(i))); }

  /// log Delta_i for i >= 2 (Delta_i > 0 there); -inf once it underflows.
  [[nodiscard]] double log_delta(int i) const {
    const double xi = x(i);
    if (xi == 0.0) return -std::numeric_limits<double>::infinity();
    const double d = std::log1p(xi * pb_minus_1_ / (1.0 - x(i - 1)));
    const double y = n_ * d;
    const double log_expm1 = y > 30.0 ? y + std::log1p(-std::exp(-y)) : std::log(std::expm1(y));
    return n_ * std::log1p(-x(i - 1)) + log_expm1;
  }

  [[nodiscard]] double delta(int i) const {
    if (i == 1) return c(1) - c(0);
    return std::exp(log_delta(i));
  }

  /// Delta_i * p^(e) for real e, computed in log space for i >= 2.
  [[nodiscard]] double delta_scaled(int i, double e) const {
    if (i == 1) return delta(1) * std::exp(e * log_p_);
    const double ld = log_delta(i);
    return std::isfinite(ld) ? std::exp(ld + e * log_p_) : 0.0;
  }

  [[nodiscard]] double n() const noexcept { return n_; }
  [[nodiscard]] double log_p() const noexcept { return log_p_; }

  /// S_from = sum_{l >= from} Delta_l p^(from - l), with from >= 1.
  [[nodiscard]] SeriesValue scaled_suffix(int from, double rel_tol) const {
    CompensatedSum sum;
    for (int l = from;; ++l) {
      sum.add(delta_scaled(l, from - l));
      // sum_{l' > l} Delta_l' = 1 - c_l and every weight is <= p^(from - l - 1).
      const double tail = std::exp((from - l - 1) * log_p_) * one_minus_c(l);
      if (tail <= rel_tol * std::abs(sum.value()) || tail < 1e-300) return {sum.value(), tail};
      if (l - from > 200000) throw std::runtime_error("walk: series did not converge");
    }
  }

 private:
  const GeneratorLaw& law_;
  double n_;
  double log_p_;
  double pb_minus_1_;
};

}  // namespace detail

/// Probability that S_n lies at a given point of the shell of radius p^j
/// (j = 0 is the identity), from
///   rho*(n, x) = (1 - alpha)^n 1{|x| <= 1}
///              + sum_{i >= 1} ((1 - alpha p^(-ib))^n - (1 - alpha p^(-(i-1)b))^n) p^(-i) 1{|x| <= p^i}.
inline SeriesValue walk_pmf_shell(const GeneratorLaw& law, std::int64_t n, int j,
                                  double tol = 1e-15) {
  if (j < 0) throw std::domain_error("walk_pmf_shell: shell index must be >= 0");
  if (n == 0) return {j == 0 ? 1.0 : 0.0, 0.0};
  const detail::WalkSeries series(law, n);
  const int from = std::max(j, 1);
  const SeriesValue suffix = series.scaled_suffix(from, tol);
  const double scale = std::exp(-from * series.log_p());
  const double head = j == 0 ? series.c(0) : 0.0;
  return {head + suffix.value * scale, suffix.tail_bound * scale};
}

/// rho*(n, g) for g in G.
inline double walk_pmf(const GeneratorLaw& law, std::int64_t n, const GroupElement& g,
                       double tol = 1e-15) {
  if (g.level() != 0) throw std::invalid_argument("walk_pmf: expected a level-0 element");
  if (n < 1) throw std::domain_error("walk_pmf: n must be >= 1");
  return walk_pmf_shell(law, n, g.is_identity() ? 0 : g.abs().exponent(), tol).value;
}

/// P(|S_n| <= p^J) for J >= 0, i.e. c_J + sum_{l > J} Delta_l p^(J - l).
inline SeriesValue walk_ball_mass(const GeneratorLaw& law, std::int64_t n, int J,
                                  double tol = 1e-15) {
  if (J < 0) throw std::domain_error("walk_ball_mass: J must be >= 0");
  if (n == 0) return {1.0, 0.0};
  const detail::WalkSeries series(law, n);
  const SeriesValue suffix = series.scaled_suffix(J + 1, tol);
  return {series.c(J) + suffix.value / law.p(), suffix.tail_bound / law.p()};
}

/// Shell masses of S_n for shells 0..max_shell, with the exact remaining mass.
inline RadialLaw walk_radial_law(const GeneratorLaw& law, std::int64_t n, int max_shell,
                                 double tol = 1e-15) {
  if (max_shell < 0) throw std::domain_error("walk_radial_law: max_shell must be >= 0");
  RadialLaw out;
  out.p = law.p();
  out.shell_mass.assign(static_cast<std::size_t>(max_shell) + 1, 0.0);
  if (n == 0) {
    out.shell_mass[0] = 1.0;
    return out;
  }
  const detail::WalkSeries series(law, n);
  const double p = law.p();
  // T_i = sum_{l >= i} Delta_l p^(i - l); q_i = (1 - 1/p) T_i, q_0 = c_0 + T_1 / p.
  double t_next = series.scaled_suffix(max_shell + 1, tol).value;
  out.tail = (max_shell == 0 ? 1.0 - series.c(0) : series.one_minus_c(max_shell)) - t_next / p;
  for (int i = max_shell; i >= 1; --i) {
    const double t_i = series.delta(i) + t_next / p;
    out.shell_mass[static_cast<std::size_t>(i)] = (1.0 - 1.0 / p) * t_i;
    t_next = t_i;
  }
  out.shell_mass[0] = series.c(0) + t_next / p;
  return out;
}

/// E|S_n|^r for 0 < r < b, from sum_l Delta_l p^(-l) sum_{i <= l} |shell i| p^(ir).
inline SeriesValue walk_moment(const GeneratorLaw& law, std::int64_t n, double r,
                               double tol = 1e-13) {
  const auto& prm = law.params();
  if (!(r > 0.0 && r < prm.b)) throw std::domain_error("walk_moment: r must lie in (0, b)");
  if (n == 0) return {0.0, 0.0};
  const detail::WalkSeries series(law, n);
  const double p = prm.p;
  const double L = prm.log_p();
  const double kappa = (p - 1.0) * std::pow(p, r) / (std::pow(p, 1.0 + r) - 1.0);
  const double bound_const = series.n() * law.alpha() * (prm.pow_b(1.0) - 1.0) * kappa;
  const double decay = std::exp(-(prm.b - r) * L);
  CompensatedSum sum;
  for (int l = 1;; ++l) {
    const double shell_factor = -std::expm1(-l * (1.0 + r) * L);  // 1 - p^(-l(1+r))
    sum.add(kappa * series.delta_scaled(l, l * r) * shell_factor);
    // Delta_l <= n alpha (p^b - 1) p^(-lb) for l >= 2.
    const double tail = bound_const * std::exp(-(l + 1) * (prm.b - r) * L) / (1.0 - decay);
    if (tail <= tol * std::abs(sum.value())) return {sum.value(), tail};
    if (l > 1000000) throw std::runtime_error("walk_moment: series did not converge");
  }
}

}  // namespace padic
