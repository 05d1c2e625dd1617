#pragma once

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <ostream>
#include <vector>

#include "padic_walk/law/generator.hpp"
#include "padic_walk/law/series.hpp"

namespace padic {

/// A law on G_m that is uniform on each shell, stored as one mass per shell.
///
/// Index 0 is the identity; index i >= 1 is the shell of G of radius p^i,
/// which sits at radius p^(i - level) once embedded at level m.
struct RadialLaw {
  std::uint32_t p = 2;
  int level = 0;
  std::vector<double> shell_mass;
  /// Mass carried by shells beyond the last stored one.
  double tail = 0.0;

  [[nodiscard]] int max_shell() const noexcept { return static_cast<int>(shell_mass.size()) - 1; }

  [[nodiscard]] double per_point_mass(int i) const {
    return shell_mass.at(static_cast<std::size_t>(i)) / shell_cardinality(p, i);
  }

  /// Embedded radius of shell i (0 for the identity).
  [[nodiscard]] double radius(int i) const {
    return i == 0 ? 0.0 : std::pow(static_cast<double>(p), i - level);
  }

  [[nodiscard]] double stored_mass() const {
    CompensatedSum s;
    for (double q : shell_mass) s.add(q);
    return s.value();
  }

  /// sum_i q_i |x_i|^r over the stored shells (the tail is not included).
  [[nodiscard]] double partial_moment(double r) const {
    CompensatedSum s;
    for (int i = 1; i <= max_shell(); ++i) s.add(shell_mass[static_cast<std::size_t>(i)] * std::pow(radius(i), r));
    return s.value();
  }

  /// CSV with columns shell_index, radius, shell_mass, per_point_mass, tail_bound.
  void write_csv(std::ostream& out) const {
    out << "shell_index,radius,shell_mass,per_point_mass,tail_bound\n";
    char buf[160];
    for (int i = 0; i <= max_shell(); ++i) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", i, radius(i),
                    shell_mass[static_cast<std::size_t>(i)], per_point_mass(i), tail);
      out << buf;
    }
  }
};

}  // namespace padic
