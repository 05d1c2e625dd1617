#pragma once

#include <cstdint>
#include <stdexcept>

#include "padic_walk/core/group.hpp"
#include "padic_walk/law/schedule.hpp"

namespace padic {

struct SpacetimePoint {
  double time = 0.0;
  PadicValue position;
};

/// iota_m(n, g) = (n tau_m, Gamma_m(g)).
inline SpacetimePoint embed_spacetime(std::int64_t n, const GroupElement& g,
                                      const ScalingSchedule& schedule) {
  if (n < 0) throw std::domain_error("embed_spacetime: step index must be >= 0");
  return {schedule.jump_time(n), gamma_embed(g, schedule.m)};
}

}  // namespace padic
