// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "padic_walk/cli/commands.hpp"
#include "padic_walk/law/limit.hpp"
#include "padic_walk/verify/checks.hpp"
#include "padic_walk/verify/cylinder.hpp"
#include "padic_walk/verify/monte_carlo.hpp"

using namespace padic;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20261016;
constexpr std::size_t kPaths = 100000;

const std::vector<PrimeParams> kGrid{{2, 1.0, 1.0}, {3, 1.0, 1.0}, {2, 2.0, 1.0}, {5, 0.5, 1.0}};
const PrimeParams kDyadicParams{2, 1.0, 1.0};

struct Verdict {
  bool passed = true;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string grid_name(const PrimeParams& p) { return "(" + std::to_string(p.p) + "," + format_double(p.b) + ")"; }

McOptions mc_opts(std::uint64_t offset = 0) { return {kSeed, offset, 0, kDefaultMaxShell}; }

Verdict closed_form_vs_oracle() {
  Verdict v;
  for (const auto& prm : kGrid) {
    const auto res = conv_check(GeneratorLaw(prm));
    if (!res.passed) {
      v.passed = false;
      v.detail += grid_name(prm) + ": " + res.failures.front() + "; ";
    }
  }
  if (v.passed) v.detail = "walk pmf matches the convolution oracle for n <= 5, shells <= p^6, 4 parameter sets";
  return v;
}

Verdict fourier_identity() {
  Verdict v;
  for (const auto& prm : kGrid) {
    const auto res = fourier_check(GeneratorLaw(prm));
    if (!res.passed) {
      v.passed = false;
      v.detail += grid_name(prm) + ": " + res.failures.front() + "; ";
    }
  }
  if (v.passed) v.detail = "character sums equal 1 - alpha |y|^b for k in [0, 12], 4 parameter sets";
  return v;
}

Verdict alpha_bound() {
  const auto res = alpha_check({2, 3, 5, 7, 11}, {0.1, 0.5, 1, 2, 5});
  double worst = 0;
  for (std::size_t i = 0; i < res.table.rows.size(); ++i) worst = std::max(worst, res.table.number(i, "ratio"));
  return {res.passed, "25 (p, b) pairs, largest alpha / p^b = " + fmt("%.6f", worst)};
}

Verdict moment_bound() {
  Verdict v;
  const auto ns = log_spaced_steps(1, 10000, 41);
  std::size_t rows = 0;
  for (const auto& prm : kGrid) {
    const GeneratorLaw law(prm);
    for (double r : {prm.b / 2, 0.9 * prm.b}) {
      const auto res = moment_check(law, r, ns, {0, 1, 2, 3, 4, 5, 6, 7, 8}, {0.1, 1.0, 10.0});
      rows += res.table.rows.size();
      if (!res.passed) {
        v.passed = false;
        v.detail += grid_name(prm) + " r=" + format_double(r) + ": " + res.failures.front() + "; ";
      }
    }
  }
  if (v.passed) v.detail = std::to_string(rows) + " exact moments below K n^(r/b) and C t^(r/b)";
  return v;
}

Verdict multiplier_convergence() {
  // Frozen from a direct evaluation: the sup gap at m = 10 is 1.8518e-4.
  constexpr double kThreshold = 2e-4;
  const GeneratorLaw law(kDyadicParams);
  const double g4 = charfn_sup_gap(law, 4, 1.0);
  const double g10 = charfn_sup_gap(law, 10, 1.0);
  return {g10 < g4 && g10 < kThreshold,
          "sup gap " + fmt("%.6g", g4) + " at m=4, " + fmt("%.6g", g10) + " at m=10 (threshold 2e-4)"};
}

Verdict single_time_fdd() {
  Verdict v;
  const GeneratorLaw law(kDyadicParams);
  const Ball z2{PadicValue(2), 0};
  const double target = ball_prob_limit(kDyadicParams, 1.0, 0).value;
  double last_gap = 0;
  for (int m : {2, 4, 6, 8}) {
    const auto s = time_step(law, m);
    const double walk = cylinder_prob_exact(law, s, CylinderSpec{{1.0}, {z2}}).value;
    const double gap = walk - target;
    const Estimate e = mc_ball_prob(s, law, 1.0, z2, kPaths, mc_opts());
    const bool ok = std::abs(e.value - target) <= 3 * e.std_error + std::abs(gap);
    v.passed = v.passed && ok;
    v.detail += "m=" + std::to_string(m) + " mc " + fmt("%.5f", e.value) + "+-" + fmt("%.5f", e.std_error) +
                " gap " + fmt("%.2e", gap) + (ok ? "" : " (out of band)") + "; ";
    last_gap = gap;
  }
  v.passed = v.passed && std::abs(last_gap) < 0.01;
  v.detail += "target " + fmt("%.14f", target);
  return v;
}

Verdict cylinder_fdd() {
  Verdict v;
  const GeneratorLaw law(kDyadicParams);
  const auto s8 = time_step(law, 8);
  const std::vector<std::pair<std::string, CylinderSpec>> specs{
      {"A", {{1.0, 2.0}, {Ball{PadicValue(2), 0}, Ball{PadicValue(2), -1}}}},
      {"B", {{0.5, 1.5}, {Ball{PadicValue(2, Integer(1), -1), 0}, Ball{PadicValue(2), 1}}}},
  };
  std::uint64_t offset = 0;
  for (const auto& [name, spec] : specs) {
    const SeriesValue walk = cylinder_prob_exact(law, s8, spec);
    const SeriesValue limit = cylinder_prob_exact(kDyadicParams, spec);
    const Estimate e = mc_cylinder_prob(s8, law, spec, kPaths, mc_opts(offset));
    offset += kPaths;
    const double err = walk.tail_bound + limit.tail_bound;
    const bool exact_ok = std::abs(walk.value - limit.value) <= 0.02;
    // MC samples the walk itself; against the limit the pre-limit gap is allowed too.
    const bool mc_walk = std::abs(e.value - walk.value) <= 3 * e.std_error + err;
    const bool mc_limit = std::abs(e.value - limit.value) <= 3 * e.std_error + std::abs(walk.value - limit.value) + err;
    v.passed = v.passed && exact_ok && mc_walk && mc_limit;
    v.detail += name + ": walk " + fmt("%.6f", walk.value) + " limit " + fmt("%.6f", limit.value) + " mc " +
                fmt("%.5f", e.value) + "+-" + fmt("%.5f", e.std_error) + "; ";
  }
  return v;
}

Verdict chentsov() {
  const GeneratorLaw law(kDyadicParams);
  const auto res = chentsov_check(law, time_step(law, 6), 1.0, 2.0, 3.0, 0.75, kPaths, mc_opts());
  return {res.check.passed, "estimate " + fmt("%.4f", res.product.value) + " SE " + fmt("%.4f", res.product.std_error) +
                                " bound " + fmt("%.4f", res.bound)};
}

Verdict path_structure() {
  const GeneratorLaw law(kDyadicParams);
  const auto res = path_structure_check(law, time_step(law, 6), 3.0, 10000, mc_opts());
  return {res.passed, "10000 paths, " + format_cell(res.table.at(0, "change_points")) + " change points, " +
                          format_cell(res.table.at(0, "violations")) + " violations"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "padic-walk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

Verdict reproducibility() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / "padic_walk_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::vector<std::pair<std::vector<std::string>, std::string>> runs{
      {{"simulate", "--m", "4,6", "--samples", "25", "--seed", "11"}, "jsonl"},
      {{"simulate", "--m", "4", "--samples", "25", "--format", "csv"}, "csv"},
      {{"density", "--p", "3", "--b", "1.5", "--t", "0.5,2"}, "csv"},
      {{"charfn", "--m", "2,4,8", "--format", "jsonl"}, "jsonl"},
      {{"converge", "--m", "2,4,6", "--samples", "2000", "--seed", "12"}, "csv"},
      {{"moments", "--p", "5", "--b", "0.5", "--format", "json"}, "json"},
      {{"verify", "--grid", "2:1,3:1", "--samples", "2000", "--chentsov-m", "4"}, "json"},
  };
  int idx = 0;
  for (auto [args, ext] : runs) {
    const std::string first = (dir / ("run" + std::to_string(idx) + "." + ext)).string();
    const std::string second = (dir / ("rerun" + std::to_string(idx) + "." + ext)).string();
    ++idx;
    args.push_back("--out");
    args.push_back(first);
    const int c1 = cli(args);
    const int c2 = cli({"--config", first, "--out", second});
    const bool same = c1 == 0 && c2 == 0 && slurp(first) == slurp(second) && !slurp(first).empty();
    v.passed = v.passed && same;
    v.detail += args.front() + "/" + ext + (same ? " ok" : " MISMATCH") + "; ";
  }
  fs::remove_all(dir);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"closed form vs convolution oracle", closed_form_vs_oracle},
      {"Fourier identity", fourier_identity},
      {"alpha / p^b < 1", alpha_bound},
      {"moment bound", moment_bound},
      {"multiplier convergence", multiplier_convergence},
      {"single-time FDD convergence", single_time_fdd},
      {"cylinder FDD convergence", cylinder_fdd},
      {"Chentsov product moment", chentsov},
      {"path structure", path_structure},
      {"CLI reproducibility", reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s  %s [%.1fs] %s\n", i + 1, v.passed ? "PASS" : "FAIL", criteria[i].first.c_str(), secs,
                v.detail.c_str());
    std::fflush(stdout);
    if (!v.passed) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
