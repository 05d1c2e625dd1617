#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "padic_walk/core/prime.hpp"
#include "padic_walk/law/generator.hpp"
#include "padic_walk/verify/cylinder.hpp"
#include "padic_walk/verify/report.hpp"

#ifndef PADIC_WALK_VERSION
#define PADIC_WALK_VERSION "0.1.0"
#endif

namespace padic::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = PADIC_WALK_VERSION;

/// A config problem; exits with code 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error("config error in field '" + field + "': " + what), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> list{"simulate", "density", "charfn", "converge", "moments", "verify"};
  return list;
}

/// Every recognised key, in the order used when a config is written back out.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "command", "p", "b", "sigma", "m", "t", "T", "samples", "seed", "tol", "format",
      "k-min", "k-max", "r", "n-max", "exact-only", "perturb-alpha", "gap-budget", "specs",
      "chentsov-m", "grid", "max-shell", "step-cap", "threads", "out", "list"};
  return keys;
}

inline std::string key_help(const std::string& key) {
  static const std::map<std::string, std::string> help{
      {"p", "prime (default 2)"},
      {"b", "exponent b > 0 (default 1)"},
      {"sigma", "diffusion constant (default 1)"},
      {"m", "ascending levels, e.g. 2,4,6 or 2..8 (default 2..8)"},
      {"t", "comma-separated times (default 1)"},
      {"T", "simulate: path horizon (default 1)"},
      {"samples", "Monte Carlo paths; 0 disables sampling (default 1000)"},
      {"seed", "RNG seed (default 1)"},
      {"tol", "series tolerance (default 1e-13)"},
      {"format", "csv | json | jsonl"},
      {"k-min", "density/charfn: smallest exponent (default -20)"},
      {"k-max", "density: largest exponent (default 20)"},
      {"r", "moments: comma-separated orders in (0, b) (default b/2,0.9b)"},
      {"n-max", "moments: largest step count (default 10000)"},
      {"perturb-alpha", "verify: scale alpha to test the checks"},
      {"gap-budget", "converge: largest accepted gap at the last m (default 0.01)"},
      {"specs", "converge: cylinders t:center@radius;t:center@radius, several joined by |"},
      {"chentsov-m", "verify: level for the Chentsov check (default 6)"},
      {"grid", "verify: p:b pairs (default 2:1,3:1,2:2,5:0.5, or p:b when either is given)"},
      {"max-shell", "largest generator shell before rejection (default 64)"},
      {"step-cap", "largest path length (default 1e7)"},
      {"threads", "worker threads (default: PADIC_WALK_THREADS or all cores)"},
      {"out", "output file (default stdout)"},
  };
  const auto it = help.find(key);
  return it == help.end() ? std::string() : it->second;
}

/// Keys that never change an output's bytes and are left out of embedded configs.
inline bool is_volatile_key(const std::string& key) {
  return key == "threads" || key == "out" || key == "list" || key == "config";
}

using RawConfig = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string json_scalar(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + json_scalar(v[i]);
    return out;
  }
  return v.dump();
}

inline RawConfig from_json_object(const Json& obj, const std::string& source) {
  if (!obj.is_object()) throw ConfigError("config", source + " holds no config object");
  RawConfig out;
  for (const auto& [k, v] : obj.items()) out[k] = json_scalar(v);
  return out;
}

inline void check_key(const std::string& key) {
  for (const auto& k : config_keys()) {
    if (k == key) return;
  }
  throw ConfigError(key, "unknown key");
}

}  // namespace detail

/// Reads a config from any of: a flat "key = value" file, a JSON document or
/// JSONL file carrying a "config" object, or a CSV whose header holds a
/// "# config = {...}" line. Output files of this tool are therefore valid configs.
inline RawConfig parse_config_text(const std::string& text, const std::string& source = "config") {
  const std::string body = detail::trim(text);
  if (!body.empty() && body.front() == '{') {
    const std::string first = body.substr(0, body.find('\n'));
    for (const std::string& candidate : {body, first}) {
      const Json j = Json::parse(candidate, nullptr, false);
      if (j.is_discarded()) continue;
      return detail::from_json_object(j.contains("config") ? j["config"] : j, source);
    }
    throw ConfigError("config", source + " is not valid JSON");
  }
  RawConfig out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.rfind("# config = ", 0) == 0) {
      const Json j = Json::parse(line.substr(11), nullptr, false);
      if (j.is_discarded()) throw ConfigError("config", source + " has a malformed config line");
      return detail::from_json_object(j, source);
    }
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config", "expected key = value, got '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    detail::check_key(key);
    out[key] = detail::trim(line.substr(eq + 1));
  }
  return out;
}

inline RawConfig read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  RawConfig raw = parse_config_text(ss.str(), path);
  for (const auto& [k, v] : raw) detail::check_key(k);
  return raw;
}

/// Fully resolved run configuration.
struct RunConfig {
  std::string command;
  PrimeParams params;
  std::vector<int> ms;
  std::vector<double> ts;
  double T = 1.0;
  std::int64_t samples = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  double tol = 1e-13;
  std::string out;
  std::string format;
  int k_min = -20;
  int k_max = 20;
  std::vector<double> rs;
  std::int64_t n_max = 10000;
  bool exact_only = false;
  double perturb_alpha = 1.0;
  double gap_budget = 0.01;
  std::string specs;
  int chentsov_m = 6;
  std::vector<std::pair<std::uint32_t, double>> grid;
  int max_shell = 64;
  std::int64_t step_cap = 10'000'000;
  bool list = false;

  /// Everything that determines the output bytes.
  [[nodiscard]] Json embedded() const {
    Json j;
    j["command"] = command;
    j["p"] = params.p;
    j["b"] = params.b;
    j["sigma"] = params.sigma;
    j["m"] = ms;
    j["t"] = ts;
    j["T"] = T;
    j["samples"] = samples;
    j["seed"] = seed;
    j["tol"] = tol;
    j["format"] = format;
    j["k-min"] = k_min;
    j["k-max"] = k_max;
    j["r"] = rs;
    j["n-max"] = n_max;
    j["exact-only"] = exact_only;
    j["perturb-alpha"] = perturb_alpha;
    j["gap-budget"] = gap_budget;
    j["specs"] = specs;
    j["chentsov-m"] = chentsov_m;
    std::string g;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%u:%.17g", i ? "," : "", grid[i].first, grid[i].second);
      g += buf;
    }
    j["grid"] = g;
    j["max-shell"] = max_shell;
    j["step-cap"] = step_cap;
    return j;
  }
};

namespace detail {

template <class T>
T parse_number(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  T value{};
  if constexpr (std::is_floating_point_v<T>) {
    try {
      std::size_t used = 0;
      value = static_cast<T>(std::stod(s, &used));
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw ConfigError(field, "expected a number, got '" + s + "'");
    }
  } else {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError(field, "expected an integer, got '" + s + "'");
    }
  }
  return value;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

/// "2,4,6" or "2..8".
inline std::vector<int> parse_int_list(const std::string& field, const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split(s, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number<int>(field, item));
      continue;
    }
    const int lo = parse_number<int>(field, item.substr(0, dots));
    const int hi = parse_number<int>(field, item.substr(dots + 2));
    if (hi < lo) throw ConfigError(field, "range " + item + " is descending");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

inline std::vector<double> parse_double_list(const std::string& field, const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_number<double>(field, item));
  return out;
}

inline bool parse_bool(const std::string& field, const std::string& s) {
  const std::string v = trim(s);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off" || v.empty()) return false;
  throw ConfigError(field, "expected true or false, got '" + v + "'");
}

}  // namespace detail

inline const char* default_format(const std::string& command) {
  if (command == "simulate") return "jsonl";
  if (command == "verify") return "json";
  return "csv";
}

/// Turns raw key/value pairs into a validated RunConfig. Throws ConfigError
/// naming the first offending field.
inline RunConfig resolve_config(const RawConfig& raw) {
  using namespace detail;
  for (const auto& [k, v] : raw) check_key(k);
  auto has = [&](const char* k) { return raw.count(k) != 0; };
  auto get = [&](const char* k) -> const std::string& { return raw.at(k); };

  RunConfig c;
  if (!has("command")) throw ConfigError("command", "missing command");
  c.command = trim(get("command"));
  bool known = false;
  for (const auto& cmd : commands()) known = known || cmd == c.command;
  if (!known) throw ConfigError("command", "unknown command '" + c.command + "'");

  if (has("p")) c.params.p = parse_number<std::uint32_t>("p", get("p"));
  if (has("b")) c.params.b = parse_number<double>("b", get("b"));
  if (has("sigma")) c.params.sigma = parse_number<double>("sigma", get("sigma"));
  if (!is_prime(c.params.p)) throw ConfigError("p", "p must be prime, got " + std::to_string(c.params.p));
  if (!(c.params.b > 0.0)) throw ConfigError("b", "b must be > 0");
  if (!(c.params.sigma > 0.0)) throw ConfigError("sigma", "sigma must be > 0");
  try {
    alpha_const(c.params);
  } catch (const std::exception& e) {
    throw ConfigError("p", e.what());
  }

  c.ms = parse_int_list("m", has("m") ? get("m") : "2..8");
  if (c.ms.empty() && c.command != "converge") throw ConfigError("m", "m list is empty");
  for (std::size_t i = 0; i < c.ms.size(); ++i) {
    if (c.ms[i] < 0) throw ConfigError("m", "levels must be >= 0");
    if (i > 0 && c.ms[i] <= c.ms[i - 1]) throw ConfigError("m", "levels must be strictly ascending");
  }
  c.ts = parse_double_list("t", has("t") ? get("t") : "1");
  for (double t : c.ts) {
    const bool zero_ok = c.command == "charfn";
    if (!(t > 0.0 || (zero_ok && t == 0.0)) || !std::isfinite(t)) {
      throw ConfigError("t", zero_ok ? "times must be >= 0" : "times must be > 0");
    }
  }
  if (c.ts.empty()) throw ConfigError("t", "t list is empty");
  if (has("T")) c.T = parse_number<double>("T", get("T"));
  if (!(c.T > 0.0) || !std::isfinite(c.T)) throw ConfigError("T", "horizon must be > 0");
  if (has("samples")) c.samples = parse_number<std::int64_t>("samples", get("samples"));
  if (c.samples < 0) throw ConfigError("samples", "must be >= 0");
  if (has("seed")) c.seed = parse_number<std::uint64_t>("seed", get("seed"));
  if (has("threads")) c.threads = parse_number<int>("threads", get("threads"));
  if (c.threads < 0) throw ConfigError("threads", "must be >= 0");
  if (has("tol")) c.tol = parse_number<double>("tol", get("tol"));
  if (!(c.tol > 0.0 && c.tol < 1.0)) throw ConfigError("tol", "must lie in (0, 1)");
  if (has("out")) c.out = trim(get("out"));
  c.format = has("format") ? trim(get("format")) : "";
  if (c.format.empty()) c.format = default_format(c.command);
  if (c.format != "csv" && c.format != "json" && c.format != "jsonl") {
    throw ConfigError("format", "expected csv, json or jsonl, got '" + c.format + "'");
  }
  if (has("k-min")) c.k_min = parse_number<int>("k-min", get("k-min"));
  if (has("k-max")) c.k_max = parse_number<int>("k-max", get("k-max"));
  if (c.k_min > c.k_max) throw ConfigError("k-min", "k-min exceeds k-max");
  if (c.command == "charfn" && c.k_min > 0) throw ConfigError("k-min", "charfn needs k-min <= 0");
  c.rs = has("r") ? parse_double_list("r", get("r")) : std::vector<double>{c.params.b / 2, 0.9 * c.params.b};
  for (double r : c.rs) {
    if (!(r > 0.0 && r < c.params.b)) throw ConfigError("r", "orders must lie in (0, b)");
  }
  if (has("n-max")) c.n_max = parse_number<std::int64_t>("n-max", get("n-max"));
  if (c.n_max < 1) throw ConfigError("n-max", "must be >= 1");
  if (has("exact-only")) c.exact_only = parse_bool("exact-only", get("exact-only"));
  if (has("perturb-alpha")) c.perturb_alpha = parse_number<double>("perturb-alpha", get("perturb-alpha"));
  if (!(c.perturb_alpha > 0.0)) throw ConfigError("perturb-alpha", "must be > 0");
  if (has("gap-budget")) c.gap_budget = parse_number<double>("gap-budget", get("gap-budget"));
  if (!(c.gap_budget >= 0.0)) throw ConfigError("gap-budget", "must be >= 0");
  if (has("specs")) c.specs = trim(get("specs"));
  if (has("chentsov-m")) c.chentsov_m = parse_number<int>("chentsov-m", get("chentsov-m"));
  if (c.chentsov_m < 0) throw ConfigError("chentsov-m", "must be >= 0");
  if (has("max-shell")) c.max_shell = parse_number<int>("max-shell", get("max-shell"));
  if (c.max_shell < 1) throw ConfigError("max-shell", "must be >= 1");
  if (has("step-cap")) c.step_cap = parse_number<std::int64_t>("step-cap", get("step-cap"));
  if (c.step_cap < 1) throw ConfigError("step-cap", "must be >= 1");
  if (has("list")) c.list = parse_bool("list", get("list"));

  std::string grid;
  if (has("grid")) {
    grid = get("grid");
  } else if (has("p") || has("b")) {
    grid = std::to_string(c.params.p) + ":" + format_double(c.params.b);
  } else {
    grid = "2:1,3:1,2:2,5:0.5";
  }
  for (const auto& item : split(grid, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("grid", "expected p:b pairs, got '" + item + "'");
    const PrimeParams prm{parse_number<std::uint32_t>("grid", item.substr(0, colon)),
                          parse_number<double>("grid", item.substr(colon + 1)), 1.0};
    if (!is_prime(prm.p) || !(prm.b > 0.0)) throw ConfigError("grid", "invalid pair '" + item + "'");
    c.grid.emplace_back(prm.p, prm.b);
  }
  if (c.command == "converge" && !c.exact_only && c.samples > 0 && c.samples < 1000) {
    throw ConfigError("samples", "Monte Carlo needs 0 or at least 1000 samples");
  }
  if (c.command == "verify" && c.samples > 0 && c.samples < 1000) {
    throw ConfigError("samples", "Monte Carlo needs 0 or at least 1000 samples");
  }
  return c;
}

/// "t:center@radius;t:center@radius" with centers in the mantissa*p^v form;
/// several specs are separated by '|'.
inline std::vector<CylinderSpec> parse_specs(const std::string& text, std::uint32_t p) {
  std::vector<CylinderSpec> out;
  for (const auto& spec_text : detail::split(text, '|')) {
    CylinderSpec spec;
    for (const auto& epoch : detail::split(spec_text, ';')) {
      const auto colon = epoch.find(':');
      const auto at = epoch.find('@');
      if (colon == std::string::npos || at == std::string::npos || at < colon) {
        throw ConfigError("specs", "expected t:center@radius, got '" + epoch + "'");
      }
      spec.times.push_back(detail::parse_number<double>("specs", epoch.substr(0, colon)));
      try {
        spec.route.push_back(Ball{PadicValue::parse(detail::trim(epoch.substr(colon + 1, at - colon - 1)), p),
                                  detail::parse_number<int>("specs", epoch.substr(at + 1))});
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError("specs", e.what());
      }
    }
    try {
      spec.validate();
    } catch (const std::exception& e) {
      throw ConfigError("specs", e.what());
    }
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace padic::cli
