#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "padic_walk/law/limit.hpp"
#include "padic_walk/law/moments.hpp"
#include "padic_walk/law/schedule.hpp"
#include "padic_walk/law/walk.hpp"
#include "padic_walk/verify/cylinder.hpp"
#include "padic_walk/verify/monte_carlo.hpp"
#include "padic_walk/verify/oracles.hpp"
#include "padic_walk/verify/report.hpp"

namespace padic {

inline Json params_json(const PrimeParams& prm) {
  Json j;
  j["p"] = prm.p;
  j["b"] = prm.b;
  j["sigma"] = prm.sigma;
  return j;
}

inline Json law_json(const GeneratorLaw& law) {
  Json j = params_json(law.params());
  j["alpha"] = law.alpha();
  return j;
}

// ---------------------------------------------------------------------------
// Closed forms against brute force

/// walk_pmf against the convolution oracle, shell by shell.
inline CheckResult conv_check(const GeneratorLaw& law, int n_max = 5, int shell_max = 6,
                              double tol = 1e-12) {
  const TruncatedGroup window = window_for(law);
  CheckResult res{"conv", true, {}, {"conv", {"n", "shell", "closed_form", "oracle", "abs_diff", "allowed"}, {}, {}}};
  res.table.meta["params"] = law_json(law);
  res.table.meta["window_M"] = window.M;
  res.table.meta["window_deficit"] = window.discarded_mass_bound;
  res.table.meta["tol"] = tol;
  for (int n = 1; n <= n_max; ++n) {
    const ConvolutionResult oracle = conv_oracle(law, n, window);
    for (int j = 0; j <= std::min(shell_max, window.M); ++j) {
      const double card = shell_cardinality(law.p(), j);
      const double closed = walk_pmf_shell(law, n, j).value * card;
      const double brute = oracle.law.shell_mass[static_cast<std::size_t>(j)];
      const double diff = std::abs(closed - brute);
      const double allowed = tol + oracle.discarded;
      res.table.add_row({std::int64_t{n}, std::int64_t{j}, closed, brute, diff, allowed});
      if (!(diff <= allowed)) {
        res.fail("n=" + std::to_string(n) + " shell=" + std::to_string(j) + " differs by " +
                 format_double(diff));
      }
    }
  }
  return res;
}

/// Largest window with at most 2^20 elements.
inline TruncatedGroup fourier_window(const GeneratorLaw& law, std::uint64_t max_elements = 1u << 20) {
  int M = 1;
  std::uint64_t size = law.p();
  while (size * law.p() <= max_elements) {
    size *= law.p();
    ++M;
  }
  return make_window(law, M);
}

/// Brute-force character sums of the one-step law against 1 - alpha |y|^b.
inline CheckResult fourier_check(const GeneratorLaw& law, int k_max = 12, double tol = 1e-10) {
  const TruncatedGroup window = fourier_window(law);
  const std::vector<double> masses = window_masses(law, window);
  CheckResult res{"fourier", true, {}, {"fourier", {"k", "closed_form", "oracle_re", "oracle_im", "abs_diff", "allowed"}, {}, {}}};
  res.table.meta["params"] = law_json(law);
  res.table.meta["window_M"] = window.M;
  res.table.meta["window_deficit"] = window.discarded_mass_bound;
  res.table.meta["tol"] = tol;
  for (int k = 0; k <= k_max; ++k) {
    const auto z = fourier_oracle(masses, window, k);
    const double closed = charfn_generator(law, AbsValue::power(-k));
    const double diff = std::abs(z.real() - closed);
    const double allowed = tol + window.discarded_mass_bound;
    res.table.add_row({std::int64_t{k}, closed, z.real(), z.imag(), diff, allowed});
    if (!(diff <= allowed)) res.fail("k=" + std::to_string(k) + " differs by " + format_double(diff));
    if (!(std::abs(z.imag()) < tol)) res.fail("k=" + std::to_string(k) + " imaginary residue " + format_double(z.imag()));
  }
  return res;
}

/// alpha / p^b < 1, decided in integers when b is a whole number.
inline CheckResult alpha_check(const std::vector<std::uint32_t>& ps, const std::vector<double>& bs,
                               double slack = 1e-12) {
  CheckResult res{"alpha", true, {}, {"alpha", {"p", "b", "alpha", "ratio", "exact", "ok"}, {}, {}}};
  res.table.meta["slack"] = slack;
  for (auto p : ps) {
    for (double b : bs) {
      const PrimeParams prm{p, b, 1.0};
      const double pd = p;
      const double alpha = pd / (pd - 1.0) * (1.0 - std::pow(pd, -(b + 1.0)));
      const double ratio = alpha / std::pow(pd, b);
      const bool whole = b == std::floor(b) && b <= 20;
      bool ok = false;
      if (whole) {
        // alpha / p^b = (p^(b+1) - 1) / ((p - 1) p^(2b)).
        const int bi = static_cast<int>(b);
        ok = detail::pow_int(p, bi + 1) - 1 < Integer(p - 1) * detail::pow_int(p, 2 * bi);
      } else {
        ok = ratio < 1.0 - slack;
      }
      prm.validate();
      res.table.add_row({std::int64_t{p}, b, alpha, ratio, whole, ok});
      if (!ok) res.fail("p=" + std::to_string(p) + " b=" + format_double(b) + " ratio " + format_double(ratio));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Moments

inline std::vector<std::int64_t> log_spaced_steps(std::int64_t lo, std::int64_t hi, int count) {
  std::vector<std::int64_t> out;
  for (int i = 0; i < count; ++i) {
    const double x = std::exp(std::log(static_cast<double>(lo)) +
                              (std::log(static_cast<double>(hi)) - std::log(static_cast<double>(lo))) * i /
                                  std::max(1, count - 1));
    const auto n = static_cast<std::int64_t>(std::llround(x));
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  return out;
}

/// Exact moments against E|S_n|^r < K n^(r/b) and E|Y^m_t|^r < C t^(r/b).
inline CheckResult moment_check(const GeneratorLaw& law, double r, const std::vector<std::int64_t>& ns,
                                const std::vector<int>& ms, const std::vector<double>& ts,
                                double tol = 1e-13) {
  const auto& prm = law.params();
  const double K = moment_bound_K(law, r);
  const double C = embedded_moment_bound_C(law, r);
  CheckResult res{"moments", true, {}, {"moments", {"kind", "n", "m", "t", "moment", "tail_bound", "bound", "ok"}, {}, {}}};
  res.table.meta["params"] = law_json(law);
  res.table.meta["r"] = r;
  res.table.meta["K"] = K;
  res.table.meta["C"] = C;
  res.table.meta["tol"] = tol;
  for (auto n : ns) {
    const SeriesValue mom = walk_moment(law, n, r, tol);
    const double bound = K * std::pow(static_cast<double>(n), r / prm.b);
    const bool ok = mom.upper() < bound;
    res.table.add_row({std::string("walk"), n, std::int64_t{-1}, std::numeric_limits<double>::quiet_NaN(),
                       mom.value, mom.tail_bound, bound, ok});
    if (!ok) res.fail("walk n=" + std::to_string(n) + " moment " + format_double(mom.value) + " >= " + format_double(bound));
  }
  for (int m : ms) {
    const ScalingSchedule s = time_step(law, m);
    const double scale = std::pow(static_cast<double>(prm.p), -m * r);
    for (double t : ts) {
      const auto n = s.step_index(t);
      const SeriesValue mom = walk_moment(law, n, r, tol);
      const double bound = C * std::pow(t, r / prm.b);
      const bool ok = mom.upper() * scale < bound;
      res.table.add_row({std::string("embedded"), n, std::int64_t{m}, t, mom.value * scale,
                         mom.tail_bound * scale, bound, ok});
      if (!ok) {
        res.fail("embedded m=" + std::to_string(m) + " t=" + format_double(t) + " moment " +
                 format_double(mom.value * scale) + " >= " + format_double(bound));
      }
    }
  }
  return res;
}

/// MC product moment E|Y_t3 - Y_t2|^r |Y_t2 - Y_t1|^r against C^2 (t3 - t1)^(2r/b).
struct ChentsovResult {
  CheckResult check;
  Estimate product;
  Estimate left;
  Estimate right;
  double bound = 0.0;
  /// |E[ab] - E[a]E[b]| and the 4-SE band it should fall in.
  double factor_gap = 0.0;
  double factor_band = 0.0;
};

inline ChentsovResult chentsov_check(const GeneratorLaw& law, const ScalingSchedule& schedule,
                                     double t1, double t2, double t3, double r,
                                     std::size_t n_samples, const McOptions& opts) {
  const auto& prm = law.params();
  if (!(t1 >= 0.0 && t1 < t2 && t2 <= t3)) throw std::invalid_argument("chentsov_check: need 0 <= t1 < t2 <= t3");
  if (!(r > prm.b / 2 && r < prm.b)) throw std::invalid_argument("chentsov_check: r must lie in (b/2, b)");
  std::vector<double> left(n_samples), right(n_samples), prod(n_samples);
  for_each_sample(schedule, law, {t1, t2, t3}, n_samples, opts, [&](std::size_t i, const std::vector<PadicValue>& ys) {
    left[i] = std::pow((ys[1] - ys[0]).norm(), r);
    right[i] = std::pow((ys[2] - ys[1]).norm(), r);
    prod[i] = left[i] * right[i];
  });
  ChentsovResult out;
  out.product = mean_estimate(prod);
  out.left = mean_estimate(left);
  out.right = mean_estimate(right);
  const double C = embedded_moment_bound_C(law, r);
  out.bound = C * C * std::pow(t3 - t1, 2.0 * r / prm.b);
  out.factor_gap = std::abs(out.product.value - out.left.value * out.right.value);
  const double se_fact = std::hypot(out.right.value * out.left.std_error, out.left.value * out.right.std_error);
  out.factor_band = 4.0 * std::hypot(out.product.std_error, se_fact);

  auto& res = out.check;
  res.name = "chentsov";
  res.table = {"chentsov", {"estimate", "std_error", "bound", "left_mean", "right_mean", "factor_gap", "factor_band"}, {}, {}};
  res.table.meta["params"] = law_json(law);
  res.table.meta["m"] = schedule.m;
  res.table.meta["epoch"] = {t1, t2, t3};
  res.table.meta["r"] = r;
  res.table.meta["samples"] = n_samples;
  res.table.meta["seed"] = opts.seed;
  res.table.meta["stream_offset"] = opts.stream_offset;
  res.table.add_row({out.product.value, out.product.std_error, out.bound, out.left.value, out.right.value,
                     out.factor_gap, out.factor_band});
  if (!(out.product.value - 3.0 * out.product.std_error <= out.bound)) {
    res.fail("estimate " + format_double(out.product.value) + " exceeds bound " + format_double(out.bound));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Characteristic functions and the gamma inequality

/// |E_m(t, y) - exp(-sigma t |y|^b)| for |y| = p^e, e = -k_max..m. With
/// beyond > 0 the rows e = m+1..m+beyond show the cutoff branch; sup_gap is
/// taken over e <= m only.
inline Table charfn_gap(const GeneratorLaw& law, const ScalingSchedule& schedule, double t, int k_max = 40,
                        int beyond = 0) {
  if (!(t >= 0.0)) throw std::domain_error("charfn_gap: t must be >= 0");
  Table tab{"charfn_gap", {"exponent", "abs_y", "pre_limit", "limit", "gap"}, {}, {}};
  tab.meta["params"] = law_json(law);
  tab.meta["m"] = schedule.m;
  tab.meta["t"] = t;
  double sup = 0.0;
  for (int e = -k_max; e <= schedule.m + beyond; ++e) {
    const AbsValue y = AbsValue::power(e);
    const double pre = em_multiplier(schedule, law, t, y);
    const double lim = limit_charfn(law.params(), t, y);
    const double gap = std::abs(pre - lim);
    if (e <= schedule.m) sup = std::max(sup, gap);
    tab.add_row({std::int64_t{e}, y.to_double(law.p()), pre, lim, gap});
  }
  tab.meta["sup_gap"] = sup;
  return tab;
}

inline double charfn_sup_gap(const GeneratorLaw& law, int m, double t, int k_max = 40) {
  return charfn_gap(law, time_step(law, m), t, k_max).meta["sup_gap"].get<double>();
}

/// 1 <= x^a Gamma(x) / Gamma(x + a) <= ((x + a) / x)^(1 - a); the printed
/// upper bound (x / (x + a))^(1 - a) is evaluated alongside.
inline CheckResult wendel_check(const std::vector<double>& xs, const std::vector<double>& as, double slack = 1e-9) {
  CheckResult res{"wendel", true, {}, {"wendel", {"x", "a", "middle", "upper", "upper_as_printed", "ok", "ok_as_printed"}, {}, {}}};
  res.table.meta["slack"] = slack;
  for (double x : xs) {
    for (double a : as) {
      if (!(x > 0.0) || !(a >= 0.0 && a < 1.0)) throw std::domain_error("wendel_check: need x > 0 and a in [0, 1)");
      const double middle = std::exp(a * std::log(x) + std::lgamma(x) - std::lgamma(x + a));
      const double upper = std::pow((x + a) / x, 1.0 - a);
      const double printed = std::pow(x / (x + a), 1.0 - a);
      const bool ok = middle >= 1.0 - slack && middle <= upper + slack;
      const bool ok_printed = middle >= 1.0 - slack && middle <= printed + slack;
      res.table.add_row({x, a, middle, upper, printed, ok, ok_printed});
      if (!ok) res.fail("x=" + format_double(x) + " a=" + format_double(a) + " middle " + format_double(middle));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Convergence of finite-dimensional distributions

struct FddOptions {
  double tol = 1e-13;
  /// Largest |walk - limit| accepted at the last m of the ladder.
  double gap_budget = 0.01;
  std::size_t mc_samples = 0;
  McOptions mc;
};

/// For each spec and each m: the exact walk probability, the exact limit
/// probability and their gap, plus an MC estimate when mc_samples > 0.
inline CheckResult fdd_convergence_report(const GeneratorLaw& law, const std::vector<CylinderSpec>& specs,
                                          const std::vector<int>& ms, const FddOptions& opts) {
  CheckResult res{"fdd", true, {}, {"fdd", {"spec", "m", "walk", "walk_error", "limit", "limit_error", "gap", "mc", "mc_std_error", "mc_ok"}, {}, {}}};
  res.table.meta["params"] = law_json(law);
  res.table.meta["tol"] = opts.tol;
  res.table.meta["gap_budget"] = opts.gap_budget;
  res.table.meta["samples"] = opts.mc_samples;
  res.table.meta["seed"] = opts.mc.seed;
  res.table.meta["stream_offset"] = opts.mc.stream_offset;
  Json spec_list = Json::array();
  for (const auto& s : specs) spec_list.push_back(s.describe());
  res.table.meta["specs"] = spec_list;
  if (ms.empty()) return res;
  const int m_last = *std::max_element(ms.begin(), ms.end());
  for (std::size_t si = 0; si < specs.size(); ++si) {
    const auto& spec = specs[si];
    const SeriesValue limit = cylinder_prob_exact(law.params(), spec, -1, opts.tol);
    for (int m : ms) {
      const ScalingSchedule s = time_step(law, m);
      const SeriesValue walk = cylinder_prob_exact(law, s, spec, -1, opts.tol);
      const double gap = walk.value - limit.value;
      double mc = std::numeric_limits<double>::quiet_NaN();
      double se = std::numeric_limits<double>::quiet_NaN();
      bool mc_ok = true;
      if (opts.mc_samples > 0) {
        const Estimate e = mc_cylinder_prob(s, law, spec, opts.mc_samples, opts.mc);
        mc = e.value;
        se = e.std_error;
        // Both exact numbers must sit within 3 SE (plus their declared errors) of the estimate.
        mc_ok = std::abs(mc - walk.value) <= 3.0 * se + walk.tail_bound &&
                std::abs(mc - limit.value) <= 3.0 * se + std::abs(gap) + limit.tail_bound;
        if (!mc_ok) {
          res.fail("spec " + std::to_string(si) + " m=" + std::to_string(m) + ": MC " + format_double(mc) +
                   " outside 3 SE of the exact values");
        }
      }
      res.table.add_row({static_cast<std::int64_t>(si), std::int64_t{m}, walk.value, walk.tail_bound,
                         limit.value, limit.tail_bound, gap, mc, se, mc_ok});
      if (m == m_last && !(std::abs(gap) <= opts.gap_budget + walk.tail_bound + limit.tail_bound)) {
        res.fail("spec " + std::to_string(si) + " gap " + format_double(gap) + " at m=" + std::to_string(m) +
                 " exceeds " + format_double(opts.gap_budget));
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Structure of sampled paths

/// Every state of every path is a grid point of Gamma_m, the path starts at 0,
/// and every change point n satisfies step_index(n tau) = n with the previous
/// state still held just before n tau.
inline CheckResult path_structure_check(const GeneratorLaw& law, const ScalingSchedule& schedule, double T,
                                        std::size_t n_paths, const McOptions& opts) {
  CheckResult res{"path_structure", true, {}, {"path_structure", {"paths", "states", "change_points", "violations"}, {}, {}}};
  res.table.meta["params"] = law_json(law);
  res.table.meta["m"] = schedule.m;
  res.table.meta["T"] = T;
  res.table.meta["seed"] = opts.seed;
  res.table.meta["stream_offset"] = opts.stream_offset;
  std::vector<std::int64_t> states(n_paths, 0), changes(n_paths, 0), bad(n_paths, 0);
  parallel_for(n_paths, opts.threads, [&](std::size_t i) {
    CounterRng rng(opts.seed, opts.stream_offset + i);
    const StepPath path = sample_path(rng, schedule, law, T, kDefaultStepCap, opts.max_shell);
    states[i] = static_cast<std::int64_t>(path.states.size());
    if (!path.states.front().is_zero()) ++bad[i];
    for (std::size_t n = 0; n < path.states.size(); ++n) {
      const auto& x = path.states[n];
      if (x.is_negative() || !(section_j(group_project(x, schedule.m)) == x)) ++bad[i];
      if (n == 0 || x == path.states[n - 1]) continue;
      ++changes[i];
      const double at = schedule.jump_time(static_cast<std::int64_t>(n));
      if (at > T) continue;
      const double before = std::nextafter(at, 0.0);
      if (schedule.step_index(at) != static_cast<std::int64_t>(n) || !(path_eval(path, at) == x) ||
          !(path_eval(path, before) == path.states[n - 1])) {
        ++bad[i];
      }
    }
  });
  std::int64_t s = 0, c = 0, v = 0;
  for (std::size_t i = 0; i < n_paths; ++i) {
    s += states[i];
    c += changes[i];
    v += bad[i];
  }
  res.table.add_row({static_cast<std::int64_t>(n_paths), s, c, v});
  if (v != 0) res.fail(std::to_string(v) + " structural violations");
  return res;
}

}  // namespace padic
