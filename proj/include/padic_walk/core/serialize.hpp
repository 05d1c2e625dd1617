#pragma once

#include <string>

#include <json.hpp>

#include "padic_walk/core/padic_value.hpp"

namespace padic {

/// {"p":2,"digits":{"-1":1,"0":1}} for a nonnegative value; zero has no digits.
inline nlohmann::ordered_json to_digit_json(const PadicValue& x) {
  nlohmann::ordered_json j;
  j["p"] = x.prime();
  auto& digits = j["digits"] = nlohmann::ordered_json::object();
  for (const auto& [k, a] : x.digits().entries()) digits[std::to_string(k)] = a;
  return j;
}

inline PadicValue from_digit_json(const nlohmann::ordered_json& j, int precision = kDefaultPrecision) {
  const auto p = j.at("p").get<std::uint32_t>();
  std::map<int, std::uint32_t> entries;
  for (const auto& [k, a] : j.at("digits").items()) entries[std::stoi(k)] = a.get<std::uint32_t>();
  return PadicValue::from_digits(Digits(p, entries), precision);
}

}  // namespace padic
