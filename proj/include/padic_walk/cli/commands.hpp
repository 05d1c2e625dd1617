#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "padic_walk/cli/config.hpp"
#include "padic_walk/error.hpp"
#include "padic_walk/law/limit.hpp"
#include "padic_walk/sampler/parallel.hpp"
#include "padic_walk/sampler/path_io.hpp"
#include "padic_walk/verify/checks.hpp"

namespace padic::cli {

enum ExitCode : int { kOk = 0, kAssertion = 1, kConfig = 2, kResource = 3 };

/// Result of a command: the rendered output and whether every assertion held.
struct CommandOutput {
  std::string text;
  bool passed = true;
};

namespace detail {

inline GeneratorLaw make_law(const RunConfig& c, const PrimeParams& prm) {
  const GeneratorLaw law(prm);
  return c.perturb_alpha == 1.0 ? law : law.with_alpha_scale(c.perturb_alpha);
}

inline McOptions mc_options(const RunConfig& c) {
  return {c.seed, 0, resolve_threads(c.threads), c.max_shell};
}

inline std::string render_tables(const RunConfig& c, const std::vector<Table>& tables, const Json& extra = Json::object()) {
  std::ostringstream out;
  const Json cfg = c.embedded();
  if (c.format == "csv") {
    out << "# config = " << cfg.dump() << '\n';
    out << "# version = " << kVersion << '\n';
    for (const auto& [k, v] : extra.items()) out << "# " << k << " = " << v.dump() << '\n';
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (i) out << '\n';
      tables[i].write_csv(out);
    }
  } else if (c.format == "jsonl") {
    for (const auto& t : tables) {
      Json line;
      line["config"] = cfg;
      line["version"] = kVersion;
      for (const auto& [k, v] : extra.items()) line[k] = v;
      line["table"] = t.to_json();
      out << line.dump() << '\n';
    }
  } else {
    Json doc;
    doc["config"] = cfg;
    doc["version"] = kVersion;
    for (const auto& [k, v] : extra.items()) doc[k] = v;
    Json arr = Json::array();
    for (const auto& t : tables) arr.push_back(t.to_json());
    doc["tables"] = std::move(arr);
    out << doc.dump(2) << '\n';
  }
  return out.str();
}

inline std::vector<CylinderSpec> converge_specs(const RunConfig& c) {
  if (!c.specs.empty()) return parse_specs(c.specs, c.params.p);
  const std::uint32_t p = c.params.p;
  const PadicValue zero(p);
  std::vector<CylinderSpec> specs;
  for (double t : c.ts) specs.push_back({{t}, {Ball{zero, 0}}});
  specs.push_back({{1.0, 2.0}, {Ball{zero, 0}, Ball{zero, -1}}});
  specs.push_back({{0.5, 1.5}, {Ball{PadicValue(p, Integer(1), -1), 0}, Ball{zero, 1}}});
  return specs;
}

}  // namespace detail

/// Sampled paths of Y^m on [0, T] for every m, `samples` paths each.
inline CommandOutput cmd_simulate(const RunConfig& c) {
  CommandOutput result;
  if (c.samples == 0) return result;
  const GeneratorLaw law = detail::make_law(c, c.params);
  const int threads = resolve_threads(c.threads);
  const Json cfg = c.embedded();
  std::ostringstream out;
  Json doc_paths = Json::array();
  if (c.format == "csv") {
    out << "# config = " << cfg.dump() << '\n';
    out << "# version = " << kVersion << '\n';
    out << "m,";
    write_path_csv_header(out);
  }
  for (int m : c.ms) {
    const ScalingSchedule schedule = time_step(law, m);
    if (std::ceil(c.T * schedule.lambda) > static_cast<double>(c.step_cap)) {
      throw resource_error("simulate: m=" + std::to_string(m) + " needs more than step-cap steps");
    }
    std::vector<StepPath> paths(static_cast<std::size_t>(c.samples));
    parallel_for(paths.size(), threads, [&](std::size_t i) {
      CounterRng rng(c.seed, i);
      paths[i] = sample_path(rng, schedule, law, c.T, c.step_cap, c.max_shell);
    });
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (c.format == "jsonl") {
        Json line = path_to_json(paths[i]);
        line["config"] = cfg;
        line["version"] = kVersion;
        out << line.dump() << '\n';
      } else if (c.format == "csv") {
        std::ostringstream rows;
        write_path_csv(rows, paths[i], i);
        std::istringstream in(rows.str());
        std::string row;
        while (std::getline(in, row)) out << m << ',' << row << '\n';
      } else {
        doc_paths.push_back(path_to_json(paths[i]));
      }
    }
  }
  if (c.format == "json") {
    Json doc;
    doc["config"] = cfg;
    doc["version"] = kVersion;
    doc["paths"] = std::move(doc_paths);
    out << doc.dump() << '\n';
  }
  result.text = out.str();
  return result;
}

/// Radial table of the limit density and ball probabilities for each t.
inline CommandOutput cmd_density(const RunConfig& c) {
  const auto& prm = c.params;
  const double p = prm.p;
  std::vector<Table> tables;
  for (double t : c.ts) {
    Table tab{"density", {"k", "radius", "density", "density_tail", "shell_mass", "ball_prob", "ball_tail"}, {}, {}};
    tab.meta["params"] = params_json(prm);
    tab.meta["t"] = t;
    tab.meta["tol"] = c.tol;
    const SeriesValue inner = ball_prob_limit(prm, t, c.k_min - 1, c.tol);
    const SeriesValue outer = ball_prob_limit(prm, t, c.k_max, c.tol);
    tab.meta["inner_mass"] = inner.value;
    tab.meta["outer_mass"] = 1.0 - outer.value;
    for (int k = c.k_min; k <= c.k_max; ++k) {
      const SeriesValue rho = limit_density(prm, t, AbsValue::power(k), c.tol);
      const SeriesValue ball = ball_prob_limit(prm, t, k, c.tol);
      const double shell_volume = std::pow(p, k) * (1.0 - 1.0 / p);
      tab.add_row({std::int64_t{k}, std::pow(p, k), rho.value, rho.tail_bound, rho.value * shell_volume,
                   ball.value, ball.tail_bound});
    }
    tables.push_back(std::move(tab));
  }
  return {detail::render_tables(c, tables), true};
}

/// |E_m(t, y) - exp(-sigma t |y|^b)| over |y| for every (m, t), plus the sup gaps.
inline CommandOutput cmd_charfn(const RunConfig& c) {
  const GeneratorLaw law = detail::make_law(c, c.params);
  std::vector<Table> tables;
  Table sup{"charfn_sup", {"m", "t", "sup_gap"}, {}, {}};
  sup.meta["params"] = law_json(law);
  for (int m : c.ms) {
    const ScalingSchedule s = time_step(law, m);
    for (double t : c.ts) {
      Table tab = charfn_gap(law, s, t, -c.k_min, 1);
      sup.add_row({std::int64_t{m}, t, tab.meta["sup_gap"].get<double>()});
      tables.push_back(std::move(tab));
    }
  }
  tables.push_back(std::move(sup));
  return {detail::render_tables(c, tables), true};
}

/// FDD convergence on cylinder specs plus the multiplier sup-gap ladder.
inline CommandOutput cmd_converge(const RunConfig& c) {
  const GeneratorLaw law = detail::make_law(c, c.params);
  const auto specs = detail::converge_specs(c);
  for (const auto& spec : specs) {
    const int M = std::max(0, -spec.finest_radius());
    if (!c.ms.empty() && c.ms.front() < M) {
      throw ConfigError("m", "level " + std::to_string(c.ms.front()) + " is coarser than the route resolution p^-" +
                                 std::to_string(M));
    }
  }
  FddOptions opts;
  opts.tol = c.tol;
  opts.gap_budget = c.gap_budget;
  opts.mc_samples = c.exact_only ? 0 : static_cast<std::size_t>(c.samples);
  opts.mc = detail::mc_options(c);
  CheckResult fdd = fdd_convergence_report(law, specs, c.ms, opts);

  Table ladder{"charfn_sup", {"m", "t", "sup_gap"}, {}, {}};
  ladder.meta["params"] = law_json(law);
  std::vector<std::string> failures = fdd.failures;
  bool passed = fdd.passed;
  for (double t : c.ts) {
    double first = 0.0;
    double last = 0.0;
    for (std::size_t i = 0; i < c.ms.size(); ++i) {
      const double gap = charfn_sup_gap(law, c.ms[i], t, -c.k_min);
      if (i == 0) first = gap;
      last = gap;
      ladder.add_row({std::int64_t{c.ms[i]}, t, gap});
    }
    if (c.ms.size() >= 2 && !(last < first)) {
      passed = false;
      failures.push_back("charfn sup gap did not decrease along the m ladder at t=" + format_double(t));
    }
  }
  Json extra;
  extra["passed"] = passed;
  extra["failures"] = failures;
  return {detail::render_tables(c, {fdd.table, ladder}, extra), passed};
}

/// Exact moments against the K and C bounds for every order r.
inline CommandOutput cmd_moments(const RunConfig& c) {
  const GeneratorLaw law = detail::make_law(c, c.params);
  std::vector<Table> tables;
  bool passed = true;
  std::vector<std::string> failures;
  for (double r : c.rs) {
    CheckResult res = moment_check(law, r, log_spaced_steps(1, c.n_max, 25), c.ms, c.ts, c.tol);
    passed = passed && res.passed;
    failures.insert(failures.end(), res.failures.begin(), res.failures.end());
    tables.push_back(std::move(res.table));
  }
  Json extra;
  extra["passed"] = passed;
  extra["failures"] = failures;
  return {detail::render_tables(c, tables, extra), passed};
}

inline const std::vector<std::string>& verify_checks() {
  static const std::vector<std::string> names{"conv", "fourier", "alpha", "moments", "chentsov", "wendel"};
  return names;
}

/// Oracle suite over the configured (p, b) grid.
inline CommandOutput cmd_verify(const RunConfig& c) {
  std::vector<CheckResult> checks;
  for (const auto& [p, b] : c.grid) {
    const PrimeParams prm{p, b, c.params.sigma};
    const GeneratorLaw law = detail::make_law(c, prm);
    const std::string tag = "p=" + std::to_string(p) + ",b=" + format_double(b);
    auto add = [&](CheckResult r) {
      r.name += "[" + tag + "]";
      r.table.name = r.name;
      checks.push_back(std::move(r));
    };
    add(conv_check(law, 5, 6, 1e-12));
    add(fourier_check(law, 12, 1e-10));
    for (double r : {b / 2, 0.9 * b}) {
      CheckResult mom = moment_check(law, r, log_spaced_steps(1, c.n_max, 25), c.ms, c.ts, c.tol);
      mom.name += "[r=" + format_double(r) + "]";
      add(std::move(mom));
    }
    if (c.samples > 0) {
      ChentsovResult ch = chentsov_check(law, time_step(law, c.chentsov_m), 1.0, 2.0, 3.0, 0.75 * b,
                                         static_cast<std::size_t>(c.samples), detail::mc_options(c));
      add(std::move(ch.check));
    }
  }
  checks.push_back(alpha_check({2, 3, 5, 7, 11}, {0.1, 0.5, 1.0, 2.0, 5.0}));
  checks.push_back(wendel_check({0.1, 0.5, 1.0, 2.0, 3.0, 10.0, 100.0}, {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}));

  bool passed = true;
  for (const auto& ch : checks) passed = passed && ch.passed;
  std::ostringstream out;
  const Json cfg = c.embedded();
  if (c.format == "json") {
    Json doc;
    doc["config"] = cfg;
    doc["version"] = kVersion;
    doc["passed"] = passed;
    Json arr = Json::array();
    for (const auto& ch : checks) arr.push_back(ch.to_json());
    doc["checks"] = std::move(arr);
    out << doc.dump(2) << '\n';
    return {out.str(), passed};
  }
  std::vector<Table> tables;
  Json summary = Json::object();
  for (const auto& ch : checks) {
    summary[ch.name] = ch.passed;
    tables.push_back(ch.table);
  }
  Json extra;
  extra["passed"] = passed;
  extra["checks"] = summary;
  return {detail::render_tables(c, tables, extra), passed};
}

inline CommandOutput dispatch(const RunConfig& c) {
  if (c.command == "simulate") return cmd_simulate(c);
  if (c.command == "density") return cmd_density(c);
  if (c.command == "charfn") return cmd_charfn(c);
  if (c.command == "converge") return cmd_converge(c);
  if (c.command == "moments") return cmd_moments(c);
  return cmd_verify(c);
}

/// Entry point shared by the executable and the tests. Returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact p-adic random walks, their scaling limit, and numerical checks", "padic-walk"};
  app.set_version_flag("--version", std::string(kVersion));
  std::string command;
  app.add_option("command", command, "simulate | density | charfn | converge | moments | verify");
  std::string config_path;
  app.add_option("--config", config_path, "Read key = value pairs (or any output file of this tool)");
  std::map<std::string, std::string> values;
  for (const auto& key : config_keys()) {
    if (key == "command" || key == "exact-only" || key == "list") continue;
    app.add_option("--" + key, values[key], key_help(key));
  }
  app.add_flag("--exact-only", "Skip Monte Carlo in converge");
  app.add_flag("--list", "verify: print check names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfig;
  }

  try {
    RawConfig raw;
    if (!config_path.empty()) raw = read_config_file(config_path);
    if (!command.empty()) raw["command"] = command;
    for (const auto& [key, value] : values) {
      if (app.count("--" + key) > 0) raw[key] = value;
    }
    if (app.count("--exact-only") > 0) raw["exact-only"] = "true";
    if (app.count("--list") > 0) raw["list"] = "true";

    if (raw.count("command") && raw["command"] == "verify" && raw.count("list") &&
        detail::parse_bool("list", raw["list"])) {
      for (const auto& name : verify_checks()) out << name << '\n';
      return kOk;
    }
    const RunConfig cfg = resolve_config(raw);
    const CommandOutput result = dispatch(cfg);
    if (cfg.out.empty() || cfg.out == "-") {
      out << result.text;
    } else {
      std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
      if (!file) throw ConfigError("out", "cannot write '" + cfg.out + "'");
      file << result.text;
      if (!file) throw ConfigError("out", "write to '" + cfg.out + "' failed");
    }
    if (!result.passed) {
      err << "padic-walk: one or more checks failed\n";
      return kAssertion;
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "padic-walk: " << e.what() << '\n';
    return kConfig;
  } catch (const resource_error& e) {
    err << "padic-walk: resource cap: " << e.what() << '\n';
    return kResource;
  } catch (const precision_error& e) {
    err << "padic-walk: precision cap: " << e.what() << '\n';
    return kResource;
  } catch (const std::invalid_argument& e) {
    err << "padic-walk: config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::domain_error& e) {
    err << "padic-walk: config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    err << "padic-walk: " << e.what() << '\n';
    return kAssertion;
  }
}

}  // namespace padic::cli
