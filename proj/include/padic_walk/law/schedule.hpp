#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "padic_walk/law/generator.hpp"

namespace padic {

/// Space and time scales of the m-th embedding.
///
/// The jump rate is lambda(m) = (sigma / alpha) p^(mb) and the step is
/// tau_m = 1 / lambda(m), so that delta_m^b / tau_m = sigma / alpha.
struct ScalingSchedule {
  int m = 0;
  double delta = 1.0;
  double lambda = 1.0;
  double tau = 1.0;

  /// Time of the n-th jump, n * tau_m. Every jump of an embedded path happens
  /// at exactly this double value.
  [[nodiscard]] double jump_time(std::int64_t n) const noexcept {
    return static_cast<double>(n) * tau;
  }

  /// floor(t * lambda), adjusted so that jump_time(n) <= t < jump_time(n + 1)
  /// holds in floating point. Requires t >= 0.
  [[nodiscard]] std::int64_t step_index(double t) const {
    if (!(t >= 0.0)) throw std::domain_error("step_index: time must be nonnegative");
    auto n = static_cast<std::int64_t>(std::floor(t * lambda));
    while (jump_time(n + 1) <= t) ++n;
    while (n > 0 && jump_time(n) > t) --n;
    return n;
  }
};

inline ScalingSchedule time_step(const GeneratorLaw& law, int m) {
  if (m < 0) throw std::domain_error("time_step: level m must be >= 0, got " + std::to_string(m));
  const auto& prm = law.params();
  ScalingSchedule s;
  s.m = m;
  s.delta = std::pow(static_cast<double>(prm.p), -m);
  s.lambda = prm.sigma / law.alpha() * prm.pow_b(m);
  s.tau = 1.0 / s.lambda;
  if (std::abs(std::pow(s.delta, prm.b) / s.tau - prm.sigma / law.alpha()) >
      1e-12 * (prm.sigma / law.alpha())) {
    throw std::logic_error("time_step: delta^b / tau != sigma / alpha");
  }
  return s;
}

inline ScalingSchedule time_step(const PrimeParams& params, int m) {
  return time_step(GeneratorLaw(params), m);
}

/// E_m(t, y) = (1 - alpha |y|^b p^(-mb))^floor(t lambda(m)) for |y| <= p^m, else 0.
inline double em_multiplier(const ScalingSchedule& schedule, const GeneratorLaw& law, double t,
                            AbsValue abs_y) {
  if (abs_y.is_zero()) return 1.0;
  if (abs_y.exponent() > schedule.m) return 0.0;
  const auto n = schedule.step_index(t);
  if (n == 0) return 1.0;
  const double base = 1.0 - law.alpha() * law.params().pow_b(abs_y.exponent() - schedule.m);
  return std::pow(base, static_cast<double>(n));
}

}  // namespace padic
