#pragma once

#include "padic_walk/core/padic_value.hpp"

namespace padic {

enum class BallRelation { disjoint, equal, first_inside_second, second_inside_first };

/// The closed ball {x : |x - center| <= p^k}.
struct Ball {
  PadicValue center;
  int radius_exponent = 0;

  [[nodiscard]] std::uint32_t prime() const noexcept { return center.prime(); }
  [[nodiscard]] AbsValue radius() const noexcept { return AbsValue::power(radius_exponent); }

  [[nodiscard]] bool contains(const PadicValue& x) const {
    return (x - center).abs() <= radius();
  }

  [[nodiscard]] bool contains_zero() const { return center.abs() <= radius(); }

  /// Two balls are nested or disjoint.
  friend BallRelation relation(const Ball& a, const Ball& b) {
    if (a.radius_exponent <= b.radius_exponent) {
      if (!b.contains(a.center)) return BallRelation::disjoint;
      return a.radius_exponent == b.radius_exponent ? BallRelation::equal
                                                    : BallRelation::first_inside_second;
    }
    return a.contains(b.center) ? BallRelation::second_inside_first : BallRelation::disjoint;
  }
};

}  // namespace padic
