#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace padic {

/// Deterministic trial-division primality test; primes used here are small.
constexpr bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::uint64_t d = 5; d * d <= n; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

/// The prime p, the Vladimirov exponent b and the diffusion constant sigma.
struct PrimeParams {
  std::uint32_t p = 2;
  double b = 1.0;
  double sigma = 1.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const {
    if (!is_prime(p)) throw std::invalid_argument("p: " + std::to_string(p) + " is not prime");
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("b: must be a positive real");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw std::invalid_argument("sigma: must be a positive real");
    }
  }

  [[nodiscard]] double log_p() const noexcept { return std::log(static_cast<double>(p)); }

  /// p^(b*e); exact whenever the result is representable (integer b and e).
  [[nodiscard]] double pow_b(double e) const noexcept {
    return std::pow(static_cast<double>(p), b * e);
  }
};

}  // namespace padic
