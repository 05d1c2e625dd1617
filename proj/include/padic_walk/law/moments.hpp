#pragma once

#include <cmath>
#include <stdexcept>

#include "padic_walk/law/generator.hpp"

namespace padic {

/// Relative pad realizing the strict inequality K > 2(1 + p^r alpha^(r/b) Gamma((b-r)/b)).
inline constexpr double kMomentBoundPad = 1e-6;

/// A constant K with E|S_n|^r < K n^(r/b) for every n >= 1.
inline double moment_bound_K(const GeneratorLaw& law, double r) {
  const auto& prm = law.params();
  if (!(r > 0.0 && r < prm.b)) throw std::domain_error("moment_bound_K: r must lie in (0, b)");
  const double core = std::pow(static_cast<double>(prm.p), r) *
                      std::pow(law.alpha(), r / prm.b) * std::tgamma((prm.b - r) / prm.b);
  return 2.0 * (1.0 + core) * (1.0 + kMomentBoundPad);
}

inline double moment_bound_K(const PrimeParams& params, double r) {
  return moment_bound_K(GeneratorLaw(params), r);
}

/// C = K (sigma / alpha)^(r/b), the constant in E|Y^m_t|^r < C t^(r/b).
inline double embedded_moment_bound_C(const GeneratorLaw& law, double r) {
  const auto& prm = law.params();
  return moment_bound_K(law, r) * std::pow(prm.sigma / law.alpha(), r / prm.b);
}

}  // namespace padic
