#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "padic_walk/core/group.hpp"
#include "padic_walk/error.hpp"
#include "padic_walk/law/generator.hpp"
#include "padic_walk/law/schedule.hpp"
#include "padic_walk/sampler/rng.hpp"

namespace padic {

inline constexpr int kDefaultMaxShell = 64;
inline constexpr int kMaxConsecutiveRejections = 1000;
inline constexpr std::int64_t kDefaultStepCap = 10'000'000;

namespace detail {

/// Draws one generator step and hands its digits to `sink(position, digit)`
/// lowest index first, where position i stands for index -i. Returns R.
///
/// Draw order (normative for reproducibility): one 64-bit uniform for R,
/// retried on rejection, then a(-R) in {1..p-1}, then a(-R+1), ..., a(-1).
template <class Sink>
int draw_generator(CounterRng& rng, const GeneratorLaw& law, int max_shell, Sink&& sink) {
  const double log_q = -law.b() * law.params().log_p();
  const std::uint32_t p = law.p();
  int radius = 0;
  for (int rejected = 0;; ++rejected) {
    if (rejected >= kMaxConsecutiveRejections) {
      throw resource_error("sample_generator: " + std::to_string(kMaxConsecutiveRejections) +
                           " consecutive radius draws beyond max_shell " +
                           std::to_string(max_shell));
    }
    const double ratio = std::log(rng.uniform_open_closed()) / log_q;
    if (ratio < static_cast<double>(max_shell)) {
      radius = 1 + static_cast<int>(std::floor(ratio));
      if (radius <= max_shell) break;
    }
  }
  sink(radius, 1 + rng.uniform_below(p - 1));
  for (int i = radius - 1; i >= 1; --i) sink(i, rng.uniform_below(p));
  return radius;
}

/// Running sum in G kept as a digit buffer: digits_[i] is the digit at index -i.
class WalkAccumulator {
 public:
  explicit WalkAccumulator(std::uint32_t p) : p_(p), digits_(1, 0) {}

  void step(CounterRng& rng, const GeneratorLaw& law, int max_shell) {
    std::uint32_t carry = 0;
    // Positions arrive from R down to 1, so the carry moves toward index -1;
    // a carry out of index -1 lands in Z_p and vanishes.
    draw_generator(rng, law, max_shell, [&](int i, std::uint32_t d) {
      if (static_cast<std::size_t>(i) >= digits_.size()) digits_.resize(static_cast<std::size_t>(i) + 1, 0);
      const std::uint32_t s = digits_[static_cast<std::size_t>(i)] + d + carry;
      carry = s >= p_ ? 1 : 0;
      digits_[static_cast<std::size_t>(i)] = s - carry * p_;
    });
  }

  /// Current state as a Digits map, shifted by `shift` (0 for G, m for Gamma_m).
  [[nodiscard]] Digits digits(int shift = 0) const {
    const int top = static_cast<int>(digits_.size()) - 1;
    std::vector<std::uint32_t> dense(digits_.rbegin(), digits_.rend() - 1);
    return Digits(p_, -top + shift, std::move(dense));
  }

  [[nodiscard]] GroupElement element() const { return GroupElement(digits(), 0); }
  [[nodiscard]] PadicValue embedded(int m) const { return PadicValue::from_digits(digits(m)); }

 private:
  std::uint32_t p_;
  std::vector<std::uint32_t> digits_;
};

}  // namespace detail

/// One draw of the primitive step: never the identity.
inline GroupElement sample_generator(CounterRng& rng, const GeneratorLaw& law,
                                     int max_shell = kDefaultMaxShell) {
  std::vector<std::uint32_t> dense;
  int radius = 0;
  detail::draw_generator(rng, law, max_shell, [&](int i, std::uint32_t d) {
    if (dense.empty()) {
      radius = i;
      dense.resize(static_cast<std::size_t>(i), 0);
    }
    dense[static_cast<std::size_t>(radius - i)] = d;
  });
  return GroupElement(Digits(law.p(), -radius, std::move(dense)), 0);
}

/// S_0, ..., S_n with S_0 the identity.
inline std::vector<GroupElement> sample_walk(CounterRng& rng, const GeneratorLaw& law,
                                             std::int64_t n, int max_shell = kDefaultMaxShell) {
  if (n < 0) throw std::domain_error("sample_walk: n must be >= 0");
  std::vector<GroupElement> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  detail::WalkAccumulator acc(law.p());
  out.push_back(acc.element());
  for (std::int64_t k = 0; k < n; ++k) {
    acc.step(rng, law, max_shell);
    out.push_back(acc.element());
  }
  return out;
}

/// S_(n_1), ..., S_(n_k) for nondecreasing step indices, consuming exactly the
/// draws sample_walk would consume up to n_k.
inline std::vector<GroupElement> sample_walk_at(CounterRng& rng, const GeneratorLaw& law,
                                                std::span<const std::int64_t> steps,
                                                int max_shell = kDefaultMaxShell) {
  std::vector<GroupElement> out;
  out.reserve(steps.size());
  detail::WalkAccumulator acc(law.p());
  std::int64_t done = 0;
  for (const auto target : steps) {
    if (target < done) throw std::invalid_argument("sample_walk_at: step indices must be nondecreasing");
    for (; done < target; ++done) acc.step(rng, law, max_shell);
    out.push_back(acc.element());
  }
  return out;
}

/// A sampled path of Y^m on [0, horizon]: states[n] is held on [n tau, (n+1) tau).
struct StepPath {
  ScalingSchedule schedule;
  double horizon = 0.0;
  std::vector<PadicValue> states;

  [[nodiscard]] int m() const noexcept { return schedule.m; }
  [[nodiscard]] double tau() const noexcept { return schedule.tau; }
};

/// Samples Y^m_t = Gamma_m(S_floor(t lambda(m))) on [0, T] with ceil(T / tau) steps.
inline StepPath sample_path(CounterRng& rng, const ScalingSchedule& schedule,
                            const GeneratorLaw& law, double T,
                            std::int64_t step_cap = kDefaultStepCap,
                            int max_shell = kDefaultMaxShell) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::domain_error("sample_path: horizon must be > 0");
  const double wanted = std::ceil(T * schedule.lambda);
  if (wanted > static_cast<double>(step_cap)) {
    throw resource_error("sample_path: " + std::to_string(wanted) + " steps exceed the cap of " +
                         std::to_string(step_cap));
  }
  const auto steps = std::max(static_cast<std::int64_t>(wanted), schedule.step_index(T));
  StepPath path{schedule, T, {}};
  path.states.reserve(static_cast<std::size_t>(steps) + 1);
  detail::WalkAccumulator acc(law.p());
  path.states.push_back(acc.embedded(schedule.m));
  for (std::int64_t k = 0; k < steps; ++k) {
    acc.step(rng, law, max_shell);
    path.states.push_back(acc.embedded(schedule.m));
  }
  return path;
}

/// Y_t along a sampled path; right-continuous at jump times.
inline const PadicValue& path_eval(const StepPath& path, double t) {
  if (!(t >= 0.0 && t <= path.horizon)) {
    throw std::out_of_range("path_eval: t = " + std::to_string(t) + " outside [0, horizon]");
  }
  const auto n = path.schedule.step_index(t);
  return path.states.at(static_cast<std::size_t>(n));
}

}  // namespace padic
