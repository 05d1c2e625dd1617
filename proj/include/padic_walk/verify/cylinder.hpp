#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "padic_walk/core/ball.hpp"
#include "padic_walk/error.hpp"
#include "padic_walk/law/limit.hpp"
#include "padic_walk/law/schedule.hpp"
#include "padic_walk/law/walk.hpp"

namespace padic {

inline constexpr std::uint64_t kCylinderWorkCap = 10'000'000;

/// The event {Y_(t_1) in U_1, ..., Y_(t_k) in U_k} for a path started at 0.
struct CylinderSpec {
  std::vector<double> times;
  std::vector<Ball> route;

  void validate() const {
    if (route.empty()) throw std::invalid_argument("CylinderSpec: route must be nonempty");
    if (route.size() != times.size()) {
      throw std::invalid_argument("CylinderSpec: times and route differ in length");
    }
    if (times.size() > 4) throw std::invalid_argument("CylinderSpec: at most 4 epochs");
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double prev = i == 0 ? 0.0 : times[i - 1];
      if (!(times[i] > prev)) {
        throw std::invalid_argument("CylinderSpec: times must be positive and strictly increasing");
      }
      if (route[i].prime() != route.front().prime()) {
        throw std::invalid_argument("CylinderSpec: route balls mix primes");
      }
    }
  }

  /// Exponent of the smallest route radius; refining at p^(-M) with
  /// M = -finest_radius() is exact for the limit and, when M <= m, for the walk.
  [[nodiscard]] int finest_radius() const {
    int r = route.front().radius_exponent;
    for (const auto& b : route) r = std::min(r, b.radius_exponent);
    return r;
  }

  [[nodiscard]] std::string describe() const {
    std::string out;
    for (std::size_t i = 0; i < route.size(); ++i) {
      if (i) out += ";";
      out += "t=" + std::to_string(times[i]) + ":B(" + route[i].center.to_string() + ",p^" +
             std::to_string(route[i].radius_exponent) + ")";
    }
    return out;
  }
};

namespace detail {

/// Centers of the p^(r + M) sub-balls of radius p^(-M) covering B(c, p^r).
inline std::vector<PadicValue> refine_ball(const Ball& ball, int M) {
  const int r = ball.radius_exponent;
  if (r < -M) {
    throw std::invalid_argument("cylinder: route ball radius p^" + std::to_string(r) +
                                " is below the resolution p^" + std::to_string(-M));
  }
  const std::uint32_t p = ball.prime();
  const double count_d = std::pow(static_cast<double>(p), r + M);
  if (count_d > static_cast<double>(kCylinderWorkCap)) {
    throw resource_error("cylinder: " + std::to_string(count_d) + " cosets exceed the guard");
  }
  const auto count = static_cast<std::uint64_t>(std::llround(count_d));
  std::vector<PadicValue> out;
  out.reserve(count);
  // Offsets sum_{k=-r}^{M-1} a(k) p^k = u p^(-r) for u in [0, p^(r+M)).
  for (std::uint64_t u = 0; u < count; ++u) {
    out.push_back(ball.center + PadicValue(p, Integer(u), -r, ball.center.precision()));
  }
  return out;
}

/// Forward pass over the route: v(x_i) = sum_x v(x_(i-1)) T_i(x_(i-1), x_i),
/// where T_i depends only on the distance class of x_i - x_(i-1) at
/// resolution p^(-M). `transition(i, e)` takes e = exponent of that distance,
/// or e = -M - 1 for two points in the same coset.
template <class Transition>
SeriesValue cylinder_forward(const CylinderSpec& spec, int M, Transition&& transition) {
  std::vector<std::vector<PadicValue>> cosets;
  std::uint64_t work = 0;
  std::uint64_t prev = 1;
  for (const auto& ball : spec.route) {
    cosets.push_back(refine_ball(ball, M));
    work += prev * cosets.back().size();
    prev = cosets.back().size();
    if (work > kCylinderWorkCap) {
      throw resource_error("cylinder: more than " + std::to_string(kCylinderWorkCap) +
                           " coset pairs");
    }
  }
  const std::uint32_t p = spec.route.front().prime();
  std::vector<PadicValue> from{PadicValue(p)};
  std::vector<double> value{1.0};
  std::vector<double> error{0.0};
  for (std::size_t i = 0; i < cosets.size(); ++i) {
    std::map<int, SeriesValue> cache;
    std::vector<double> next_value(cosets[i].size(), 0.0);
    std::vector<double> next_error(cosets[i].size(), 0.0);
    for (std::size_t b = 0; b < cosets[i].size(); ++b) {
      CompensatedSum v;
      CompensatedSum err;
      for (std::size_t a = 0; a < from.size(); ++a) {
        if (value[a] == 0.0 && error[a] == 0.0) continue;
        const AbsValue d = (cosets[i][b] - from[a]).abs();
        const int e = d.is_zero() || d.exponent() <= -M ? -M - 1 : d.exponent();
        auto it = cache.find(e);
        if (it == cache.end()) it = cache.emplace(e, transition(i, e)).first;
        v.add(value[a] * it->second.value);
        err.add(error[a] * (it->second.value + it->second.tail_bound) + value[a] * it->second.tail_bound);
      }
      next_value[b] = v.value();
      next_error[b] = err.value();
    }
    from = std::move(cosets[i]);
    value = std::move(next_value);
    error = std::move(next_error);
  }
  CompensatedSum total;
  CompensatedSum total_error;
  for (std::size_t a = 0; a < value.size(); ++a) {
    total.add(value[a]);
    total_error.add(error[a]);
  }
  return {total.value(), total_error.value()};
}

inline int default_resolution(const CylinderSpec& spec) { return std::max(0, -spec.finest_radius()); }

}  // namespace detail

/// P^m(C(h)) for the embedded walk at level m, refined at resolution p^(-M)
/// (M defaults to the finest route radius and must not exceed m).
inline SeriesValue cylinder_prob_exact(const GeneratorLaw& law, const ScalingSchedule& schedule,
                                       const CylinderSpec& spec, int M = -1, double tol = 1e-15) {
  spec.validate();
  if (M < 0) M = detail::default_resolution(spec);
  const int m = schedule.m;
  if (M > m) {
    throw std::invalid_argument("cylinder_prob_exact: resolution M = " + std::to_string(M) +
                                " exceeds the level m = " + std::to_string(m));
  }
  std::vector<std::int64_t> steps;
  std::int64_t last = 0;
  for (double t : spec.times) {
    const auto n = schedule.step_index(t);
    steps.push_back(n - last);
    last = n;
  }
  const double cell = std::pow(static_cast<double>(law.p()), m - M);
  return detail::cylinder_forward(spec, M, [&](std::size_t i, int e) -> SeriesValue {
    const auto n = steps[i];
    if (e < -M) return walk_ball_mass(law, n, m - M, tol);
    const SeriesValue point = walk_pmf_shell(law, n, e + m, tol);
    return {point.value * cell, point.tail_bound * cell};
  });
}

/// P(C(h)) for the limit process; exact at any resolution at or finer than the route.
inline SeriesValue cylinder_prob_exact(const PrimeParams& params, const CylinderSpec& spec,
                                       int M = -1, double tol = 1e-15) {
  spec.validate();
  if (M < 0) M = detail::default_resolution(spec);
  const double volume = std::pow(static_cast<double>(params.p), -M);
  return detail::cylinder_forward(spec, M, [&](std::size_t i, int e) -> SeriesValue {
    const double dt = spec.times[i] - (i == 0 ? 0.0 : spec.times[i - 1]);
    if (e < -M) return ball_prob_limit(params, dt, -M, tol);
    const SeriesValue rho = limit_density(params, dt, AbsValue::power(e), tol);
    return {rho.value * volume, rho.tail_bound * volume};
  });
}

}  // namespace padic
