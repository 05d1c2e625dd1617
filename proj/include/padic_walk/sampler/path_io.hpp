#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "padic_walk/sampler/sampler.hpp"

namespace padic {

/// {"m":..,"tau":..,"states":["0","1*2^-3",...]}; keys keep this order.
inline nlohmann::ordered_json path_to_json(const StepPath& path) {
  nlohmann::ordered_json j;
  j["m"] = path.m();
  j["tau"] = path.tau();
  auto& states = j["states"] = nlohmann::ordered_json::array();
  for (const auto& s : path.states) states.push_back(s.to_string());
  return j;
}

inline void write_path_jsonl(std::ostream& out, const StepPath& path) {
  out << path_to_json(path).dump() << '\n';
}

inline void write_path_csv_header(std::ostream& out) { out << "path,step,time,mantissa,valuation\n"; }

/// One row per step; the zero state is written with mantissa 0 and valuation 0.
inline void write_path_csv(std::ostream& out, const StepPath& path, std::size_t path_index) {
  char buf[64];
  for (std::size_t n = 0; n < path.states.size(); ++n) {
    const auto& s = path.states[n];
    std::snprintf(buf, sizeof buf, "%.17g", path.schedule.jump_time(static_cast<std::int64_t>(n)));
    out << path_index << ',' << n << ',' << buf << ',' << s.mantissa().str() << ','
        << s.valuation() << '\n';
  }
}

}  // namespace padic
