#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "padic_walk/core/group.hpp"
#include "padic_walk/core/prime.hpp"

namespace padic {

/// alpha = (p / (p - 1)) * ((p^(b+1) - 1) / p^(b+1)).
///
/// Also enforces alpha / p^b < 1, which keeps every base 1 - alpha p^(-ib)
/// with i >= 1 inside (0, 1).
inline double alpha_const(const PrimeParams& params) {
  params.validate();
  const double p = params.p;
  const double alpha = p / (p - 1.0) * (1.0 - std::pow(p, -(params.b + 1.0)));
  if (!(alpha / std::pow(p, params.b) < 1.0)) {
    throw std::logic_error("alpha_const: alpha / p^b < 1 violated");
  }
  return alpha;
}

/// Law of one step of the primitive walk on G: shell i carries mass
/// (p^b - 1) p^(-ib), spread uniformly over the shell; Z_p carries none.
class GeneratorLaw {
 public:
  explicit GeneratorLaw(const PrimeParams& params) : params_(params), alpha_(alpha_const(params)) {}

  [[nodiscard]] const PrimeParams& params() const noexcept { return params_; }
  [[nodiscard]] std::uint32_t p() const noexcept { return params_.p; }
  [[nodiscard]] double b() const noexcept { return params_.b; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }

  /// A copy whose alpha is multiplied by `factor`. Only used to check that
  /// the verification suite notices a wrong constant.
  [[nodiscard]] GeneratorLaw with_alpha_scale(double factor) const {
    GeneratorLaw out = *this;
    out.alpha_ *= factor;
    return out;
  }

 private:
  PrimeParams params_;
  double alpha_;
};

/// Number of elements of G on the shell |g| = p^i (the identity for i = 0).
inline double shell_cardinality(std::uint32_t p, int i) {
  if (i < 0) throw std::domain_error("shell_cardinality: negative shell index");
  if (i == 0) return 1.0;
  return std::pow(static_cast<double>(p), i - 1) * (p - 1.0);
}

/// Prob(X in shell i) = (p^b - 1) p^(-ib) = (1 - p^(-b)) p^(-b(i-1)).
inline double shell_prob(const GeneratorLaw& law, int i) {
  if (i < 1) throw std::domain_error("shell_prob: shell index must be >= 1, got " + std::to_string(i));
  const auto& prm = law.params();
  return (1.0 - prm.pow_b(-1.0)) * prm.pow_b(-(i - 1.0));
}

/// Mass of a single point on shell i, rho(i).
inline double shell_point_mass(const GeneratorLaw& law, int i) {
  return shell_prob(law, i) / shell_cardinality(law.p(), i);
}

/// The one-step probability mass function at g.
inline double pmf_generator(const GeneratorLaw& law, const GroupElement& g) {
  if (g.level() != 0) throw std::invalid_argument("pmf_generator: expected a level-0 element");
  if (g.is_identity()) return 0.0;
  return shell_point_mass(law, g.abs().exponent());
}

/// Fourier transform of the one-step law: 1 - alpha |y|^b on Z_p.
inline double charfn_generator(const GeneratorLaw& law, AbsValue abs_y) {
  if (abs_y.is_zero()) return 1.0;
  if (abs_y.exponent() > 0) {
    throw std::domain_error("charfn_generator: |y| must be at most 1 (y in Z_p)");
  }
  return 1.0 - law.alpha() * law.params().pow_b(abs_y.exponent());
}

}  // namespace padic
