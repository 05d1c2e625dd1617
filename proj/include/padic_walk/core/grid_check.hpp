#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "padic_walk/core/group.hpp"

namespace padic {

/// Outcome of checking the grid properties of Gamma_m on a finite sample.
struct GridReport {
  int m = 0;
  std::size_t sample_size = 0;
  bool covering = true;    // every probe lies within delta_m of the grid
  bool neighbors = true;   // nearest-neighbour counts are <= p - 1 and uniform
  bool separation = true;  // distinct points are at least delta_m apart
  std::optional<int> interior_neighbor_count;
  std::vector<std::string> violations;

  [[nodiscard]] bool ok() const noexcept { return covering && neighbors && separation; }
};

namespace detail {

inline std::pair<int, std::vector<std::uint32_t>> group_key(const GroupElement& g) {
  const Digits d = g.digits();
  return {d.empty() ? 0 : d.low(), d.dense()};
}

}  // namespace detail

/// Checks the three grid properties of Gamma_m on `sample` (level-0 elements):
///  - separation: distinct g, g' have |Gamma_m(g') - Gamma_m(g)| >= p^(-m);
///  - neighbours: the grid points nearest to Gamma_m(g) sit at distance
///    p^(1-m) and differ only in digit m - 1; the number of them found in the
///    sample is at most p - 1, and equal to p - 1 for every point whose whole
///    neighbourhood was sampled;
///  - covering: each probe f is within p^(-m) of Gamma_m([p^(-m) f]).
inline GridReport grid_properties_check(int m, std::span<const GroupElement> sample,
                                        std::span<const PadicValue> probes = {}) {
  GridReport report;
  report.m = m;
  report.sample_size = sample.size();
  if (sample.empty() && probes.empty()) return report;
  const std::uint32_t p = sample.empty() ? probes.front().prime() : sample.front().prime();
  const AbsValue delta = AbsValue::power(-m);

  std::vector<PadicValue> images;
  images.reserve(sample.size());
  std::set<std::pair<int, std::vector<std::uint32_t>>> members;
  for (const auto& g : sample) {
    images.push_back(gamma_embed(g, m));
    members.insert(detail::group_key(g));
  }

  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      if (sample[i] == sample[j]) continue;
      const AbsValue d = (images[j] - images[i]).abs();
      if (d < delta) {
        report.separation = false;
        report.violations.push_back("separation: " + images[i].to_string() + " and " +
                                    images[j].to_string() + " closer than p^-m");
      }
    }
  }

  // The mesh of Gamma_m(G) is p^(1-m). A point is interior when all of its
  // p - 1 candidate neighbours Gamma_m(g + c p^-1), c = 1..p-1, were sampled.
  const AbsValue mesh = AbsValue::power(1 - m);
  std::set<std::pair<int, std::vector<std::uint32_t>>> seen;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& g = sample[i];
    if (!seen.insert(detail::group_key(g)).second) continue;
    std::set<std::pair<int, std::vector<std::uint32_t>>> at_mesh;
    for (std::size_t j = 0; j < sample.size(); ++j) {
      if ((images[j] - images[i]).abs() == mesh) at_mesh.insert(detail::group_key(sample[j]));
    }
    const int found = static_cast<int>(at_mesh.size());
    if (found > static_cast<int>(p) - 1) {
      report.neighbors = false;
      report.violations.push_back("neighbors: " + images[i].to_string() + " has " +
                                  std::to_string(found) + " nearest neighbours");
    }
    bool interior = true;
    for (std::uint32_t c = 1; c < p && interior; ++c) {
      const GroupElement step(Digits(p, {{-1, c}}), 0, g.precision());
      interior = members.contains(detail::group_key(g + step));
    }
    if (!interior) continue;
    if (report.interior_neighbor_count && *report.interior_neighbor_count != found) {
      report.neighbors = false;
      report.violations.push_back("neighbors: interior point " + images[i].to_string() +
                                  " has " + std::to_string(found) + " nearest neighbours, expected " +
                                  std::to_string(*report.interior_neighbor_count));
    }
    if (!report.interior_neighbor_count) report.interior_neighbor_count = found;
  }

  for (const auto& f : probes) {
    const GroupElement g = alpha_inverse(group_project(f, m));
    const AbsValue d = (gamma_embed(g, m) - f).abs();
    if (d > delta) {
      report.covering = false;
      report.violations.push_back("covering: probe " + f.to_string() + " is farther than p^-m");
    }
  }
  return report;
}

}  // namespace padic
