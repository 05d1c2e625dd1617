#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "padic_walk/error.hpp"
#include "padic_walk/law/generator.hpp"
#include "padic_walk/law/radial_law.hpp"
#include "padic_walk/law/series.hpp"

namespace padic {

inline constexpr double kWindowDeficitLimit = 1e-13;

/// The ball {|g| <= p^M} of G, which is a subgroup of order p^M.
///
/// Its elements are encoded as u in [0, p^M): u = sum_k a(k) p^(k + M) over the
/// digits k = -M..-1, so the group law is addition mod p^M and
/// |g| = p^(M - v_p(u)).
struct TruncatedGroup {
  std::uint32_t p = 2;
  int level = 0;
  int M = 0;
  /// Mass of the one-step law outside the window, p^(-Mb).
  double discarded_mass_bound = 0.0;

  [[nodiscard]] std::uint64_t size() const {
    if (M * std::log2(static_cast<double>(p)) > 62) {
      throw resource_error("TruncatedGroup: p^M does not fit in 64 bits");
    }
    std::uint64_t n = 1;
    for (int i = 0; i < M; ++i) n *= p;
    return n;
  }

  /// Shell index of the encoded element u (0 for the identity).
  [[nodiscard]] int shell_of(std::uint64_t u) const {
    if (u == 0) return 0;
    int v = 0;
    while (u % p == 0) {
      u /= p;
      ++v;
    }
    return M - v;
  }

  [[nodiscard]] GroupElement element(std::uint64_t u) const {
    std::vector<std::uint32_t> dense(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
      dense[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(u % p);
      u /= p;
    }
    return GroupElement(Digits(p, -M, std::move(dense)), 0);
  }
};

inline TruncatedGroup make_window(const GeneratorLaw& law, int M) {
  if (M < 1) throw std::domain_error("make_window: M must be >= 1");
  return {law.p(), 0, M, law.params().pow_b(-M)};
}

/// Smallest window whose deficit p^(-Mb) is below `limit`.
inline TruncatedGroup window_for(const GeneratorLaw& law, double limit = kWindowDeficitLimit) {
  int M = 1;
  while (law.params().pow_b(-M) >= limit) ++M;
  return make_window(law, M);
}

/// Result of the n-fold convolution on a window.
struct ConvolutionResult {
  RadialLaw law;
  /// Upper bound on the total-variation distance to the untruncated law.
  double discarded = 0.0;
};

namespace detail {

/// Law of X + Y for independent X, Y uniform on shell i of G, as shell masses 0..i.
inline std::vector<double> same_shell_sum(std::uint32_t p, int i) {
  std::vector<double> out(static_cast<std::size_t>(i) + 1, 0.0);
  const double card = shell_cardinality(p, i);
  double below = 0.0;
  for (int l = 0; l < i; ++l) {
    out[static_cast<std::size_t>(l)] = shell_cardinality(p, l) / card;
    below += out[static_cast<std::size_t>(l)];
  }
  out[static_cast<std::size_t>(i)] = 1.0 - below;
  return out;
}

}  // namespace detail

/// n-fold convolution of the one-step law restricted to the window, by dynamic
/// programming over shells. Two independent radial summands on shells i != j
/// land on shell max(i, j); on the same shell i they follow same_shell_sum.
/// conv_radial_dp accepts any window; conv_oracle insists on a negligible deficit.
inline ConvolutionResult conv_radial_dp(const GeneratorLaw& law, std::int64_t n,
                                        const TruncatedGroup& window) {
  if (n < 1) throw std::domain_error("conv_oracle: n must be >= 1");
  const int M = window.M;
  const std::uint32_t p = window.p;
  std::vector<double> step(static_cast<std::size_t>(M) + 1, 0.0);
  for (int i = 1; i <= M; ++i) step[static_cast<std::size_t>(i)] = shell_prob(law, i);
  std::vector<std::vector<double>> same(static_cast<std::size_t>(M) + 1);
  for (int i = 1; i <= M; ++i) same[static_cast<std::size_t>(i)] = detail::same_shell_sum(p, i);

  std::vector<double> cur = step;
  for (std::int64_t k = 1; k < n; ++k) {
    std::vector<double> next(cur.size(), 0.0);
    // prefix[i] = mass of cur on shells < i.
    std::vector<double> prefix(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) prefix[i + 1] = prefix[i] + cur[i];
    std::vector<double> step_prefix(step.size() + 1, 0.0);
    for (std::size_t i = 0; i < step.size(); ++i) step_prefix[i + 1] = step_prefix[i] + step[i];
    for (int i = 0; i <= M; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      next[ui] += cur[ui] * step_prefix[ui] + step[ui] * prefix[ui];
      if (i >= 1) {
        const double w = cur[ui] * step[ui];
        for (int l = 0; l <= i; ++l) next[static_cast<std::size_t>(l)] += w * same[ui][static_cast<std::size_t>(l)];
      }
    }
    cur = std::move(next);
  }
  ConvolutionResult out;
  out.law.p = p;
  out.law.level = 0;
  out.law.shell_mass = cur;
  out.discarded = -std::expm1(static_cast<double>(n) * std::log1p(-window.discarded_mass_bound));
  out.law.tail = out.discarded;
  return out;
}

inline ConvolutionResult conv_oracle(const GeneratorLaw& law, std::int64_t n,
                                     const TruncatedGroup& window) {
  if (window.discarded_mass_bound >= kWindowDeficitLimit) {
    throw std::invalid_argument("conv_oracle: window deficit " +
                                std::to_string(window.discarded_mass_bound) + " is above 1e-13");
  }
  return conv_radial_dp(law, n, window);
}

/// The one-step masses on every element of the window, indexed by encoding.
inline std::vector<double> window_masses(const GeneratorLaw& law, const TruncatedGroup& window) {
  const std::uint64_t size = window.size();
  std::vector<double> per_shell(static_cast<std::size_t>(window.M) + 1, 0.0);
  for (int i = 1; i <= window.M; ++i) per_shell[static_cast<std::size_t>(i)] = shell_point_mass(law, i);
  std::vector<double> out(size);
  for (std::uint64_t u = 0; u < size; ++u) out[u] = per_shell[static_cast<std::size_t>(window.shell_of(u))];
  return out;
}

/// Full n-fold convolution on the window by enumeration, O(n p^(2M)).
/// Used on tiny windows to validate the shell-pair reduction in conv_oracle.
inline std::vector<double> conv_enumerated(std::span<const double> masses,
                                           const TruncatedGroup& window, std::int64_t n) {
  const std::uint64_t size = window.size();
  if (size > (1u << 12)) throw resource_error("conv_enumerated: window larger than 2^12 elements");
  std::vector<double> cur(masses.begin(), masses.end());
  for (std::int64_t k = 1; k < n; ++k) {
    std::vector<double> next(size, 0.0);
    for (std::uint64_t a = 0; a < size; ++a) {
      if (cur[a] == 0.0) continue;
      for (std::uint64_t b = 0; b < size; ++b) next[(a + b) % size] += cur[a] * masses[b];
    }
    cur = std::move(next);
  }
  return cur;
}

/// Groups enumerated masses by shell.
inline RadialLaw radial_from_masses(std::span<const double> masses, const TruncatedGroup& window) {
  RadialLaw out;
  out.p = window.p;
  out.shell_mass.assign(static_cast<std::size_t>(window.M) + 1, 0.0);
  std::vector<CompensatedSum> sums(out.shell_mass.size());
  for (std::uint64_t u = 0; u < masses.size(); ++u) sums[static_cast<std::size_t>(window.shell_of(u))].add(masses[u]);
  for (std::size_t i = 0; i < sums.size(); ++i) out.shell_mass[i] = sums[i].value();
  out.tail = window.discarded_mass_bound;
  return out;
}

/// Brute-force character sum: sum_g chi(-j(g) y) mass(g) over the window, for
/// |y| = p^(-k) with the representative y = p^k.
///
/// j(g) y = u p^(k - M), so the fractional part of -j(g) y is
/// ((-u) mod p^(M-k)) / p^(M-k) for k < M and 0 otherwise.
inline std::complex<double> fourier_oracle(std::span<const double> masses,
                                           const TruncatedGroup& window, int k) {
  if (k < 0) throw std::domain_error("fourier_oracle: |y| must be at most 1");
  CompensatedSum re;
  CompensatedSum im;
  if (k >= window.M) {
    for (double w : masses) re.add(w);
    return {re.value(), 0.0};
  }
  std::uint64_t modulus = 1;
  for (int i = 0; i < window.M - k; ++i) modulus *= window.p;
  const double inv = 1.0 / static_cast<double>(modulus);
  for (std::uint64_t u = 0; u < masses.size(); ++u) {
    if (masses[u] == 0.0) continue;
    const std::uint64_t r = (modulus - u % modulus) % modulus;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) * inv;
    re.add(masses[u] * std::cos(angle));
    im.add(masses[u] * std::sin(angle));
  }
  return {re.value(), im.value()};
}

}  // namespace padic
