#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "padic_walk/core/ball.hpp"
#include "padic_walk/law/series.hpp"
#include "padic_walk/sampler/parallel.hpp"
#include "padic_walk/sampler/sampler.hpp"
#include "padic_walk/verify/cylinder.hpp"

namespace padic {

inline constexpr std::size_t kMinMcSamples = 1000;

/// A Monte Carlo mean with its standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  double multiplier = 3.0;

  [[nodiscard]] double lower() const noexcept { return value - multiplier * std_error; }
  [[nodiscard]] double upper() const noexcept { return value + multiplier * std_error; }
};

/// Sample i always uses the stream (seed, stream_offset + i), whatever the
/// thread count.
struct McOptions {
  std::uint64_t seed = 0;
  std::uint64_t stream_offset = 0;
  int threads = 1;
  int max_shell = kDefaultMaxShell;
};

/// Binomial estimate from per-sample 0/1 outcomes.
inline Estimate proportion_estimate(const std::vector<std::uint8_t>& hits) {
  Estimate e;
  e.n_samples = hits.size();
  if (hits.empty()) return e;
  std::size_t count = 0;
  for (auto h : hits) count += h;
  const double n = static_cast<double>(hits.size());
  e.value = static_cast<double>(count) / n;
  e.std_error = std::sqrt(e.value * (1.0 - e.value) / n);
  return e;
}

/// Sample mean with the usual standard error, summed in index order.
inline Estimate mean_estimate(const std::vector<double>& xs) {
  Estimate e;
  e.n_samples = xs.size();
  if (xs.empty()) return e;
  CompensatedSum s;
  for (double x : xs) s.add(x);
  const double n = static_cast<double>(xs.size());
  e.value = s.value() / n;
  if (xs.size() > 1) {
    CompensatedSum ss;
    for (double x : xs) ss.add((x - e.value) * (x - e.value));
    e.std_error = std::sqrt(ss.value() / (n - 1.0) / n);
  }
  return e;
}

/// For each sample i, the embedded states Y^m at the given times.
template <class Visit>
void for_each_sample(const ScalingSchedule& schedule, const GeneratorLaw& law,
                     const std::vector<double>& times, std::size_t n_samples,
                     const McOptions& opts, Visit&& visit) {
  std::vector<std::int64_t> steps;
  for (double t : times) steps.push_back(schedule.step_index(t));
  parallel_for(n_samples, opts.threads, [&](std::size_t i) {
    CounterRng rng(opts.seed, opts.stream_offset + i);
    const auto walk = sample_walk_at(rng, law, steps, opts.max_shell);
    std::vector<PadicValue> ys;
    ys.reserve(walk.size());
    for (const auto& g : walk) ys.push_back(gamma_embed(g, schedule.m));
    visit(i, ys);
  });
}

/// Fraction of sampled paths with Y^m_t in the ball.
inline Estimate mc_ball_prob(const ScalingSchedule& schedule, const GeneratorLaw& law, double t,
                             const Ball& ball, std::size_t n_samples, const McOptions& opts) {
  if (!(t > 0.0)) throw std::domain_error("mc_ball_prob: t must be > 0");
  if (n_samples < kMinMcSamples) throw std::invalid_argument("mc_ball_prob: need at least 1000 samples");
  std::vector<std::uint8_t> hits(n_samples, 0);
  for_each_sample(schedule, law, {t}, n_samples, opts, [&](std::size_t i, const std::vector<PadicValue>& ys) {
    hits[i] = ball.contains(ys[0]) ? 1 : 0;
  });
  return proportion_estimate(hits);
}

/// Fraction of sampled paths that follow the whole route.
inline Estimate mc_cylinder_prob(const ScalingSchedule& schedule, const GeneratorLaw& law,
                                 const CylinderSpec& spec, std::size_t n_samples,
                                 const McOptions& opts) {
  spec.validate();
  if (n_samples < kMinMcSamples) throw std::invalid_argument("mc_cylinder_prob: need at least 1000 samples");
  std::vector<std::uint8_t> hits(n_samples, 0);
  for_each_sample(schedule, law, spec.times, n_samples, opts, [&](std::size_t i, const std::vector<PadicValue>& ys) {
    bool in = true;
    for (std::size_t k = 0; k < ys.size() && in; ++k) in = spec.route[k].contains(ys[k]);
    hits[i] = in ? 1 : 0;
  });
  return proportion_estimate(hits);
}

}  // namespace padic
