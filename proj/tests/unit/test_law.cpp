#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "padic_walk/law/generator.hpp"
#include "padic_walk/law/limit.hpp"
#include "padic_walk/law/moments.hpp"
#include "padic_walk/law/radial_law.hpp"
#include "padic_walk/law/schedule.hpp"
#include "padic_walk/law/walk.hpp"
#include "padic_walk/verify/checks.hpp"

using namespace padic;

namespace {

const GeneratorLaw kDyadic(PrimeParams{2, 1.0, 1.0});

GroupElement shell_point(std::uint32_t p, int i) {
  return i == 0 ? GroupElement::identity(p, 0) : GroupElement(Digits(p, {{-i, 1}}), 0);
}

}  // namespace

TEST(Alpha, Examples) {
  EXPECT_EQ(alpha_const({2, 1.0, 1.0}), 1.5);
  EXPECT_NEAR(alpha_const({3, 1.0, 1.0}), 4.0 / 3.0, 1e-15);
  const double a = alpha_const({2, 0.5, 1.0});
  EXPECT_NEAR(a, 1.2928932188134525, 1e-15);
  EXPECT_NEAR(a / std::sqrt(2.0), 0.91421356237309503, 1e-15);
  EXPECT_THROW(alpha_const({4, 1.0, 1.0}), std::invalid_argument);
}

TEST(Alpha, RatioBelowOneOnGrid) {
  const auto res = alpha_check({2, 3, 5, 7, 11}, {0.1, 0.5, 1, 2, 5});
  EXPECT_TRUE(res.passed);
  EXPECT_EQ(res.table.rows.size(), 25u);
}

TEST(Generator, ShellProbExamples) {
  EXPECT_EQ(shell_prob(kDyadic, 1), 0.5);
  EXPECT_EQ(shell_prob(kDyadic, 2), 0.25);
  EXPECT_NEAR(shell_prob(GeneratorLaw({3, 2.0, 1.0}), 1), 8.0 / 9.0, 1e-15);
  EXPECT_THROW(shell_prob(kDyadic, 0), std::domain_error);
  double total = 0;
  const GeneratorLaw law({5, 0.5, 1.0});
  for (int i = 1; i <= 200; ++i) total += shell_prob(law, i);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Generator, PointMassExamples) {
  EXPECT_EQ(pmf_generator(kDyadic, GroupElement::identity(2, 0)), 0.0);
  EXPECT_NEAR(pmf_generator(GeneratorLaw({3, 1.0, 1.0}), shell_point(3, 1)), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(pmf_generator(kDyadic, shell_point(2, 2)), 0.125);
}

TEST(Generator, CharfnExamples) {
  EXPECT_EQ(charfn_generator(kDyadic, AbsValue::zero()), 1.0);
  EXPECT_EQ(charfn_generator(kDyadic, AbsValue::power(0)), -0.5);
  EXPECT_NEAR(charfn_generator(GeneratorLaw({3, 1.0, 1.0}), AbsValue::power(-1)), 5.0 / 9.0, 1e-15);
  EXPECT_NEAR(charfn_generator(kDyadic, AbsValue::power(-40)), 1.0, 1e-11);
  EXPECT_THROW(charfn_generator(kDyadic, AbsValue::power(1)), std::domain_error);
}

TEST(Walk, OneStepMatchesGenerator) {
  for (const auto& prm : {PrimeParams{2, 1.0, 1.0}, PrimeParams{3, 1.0, 1.0}, PrimeParams{5, 0.5, 1.0}}) {
    const GeneratorLaw law(prm);
    for (int i = 0; i <= 8; ++i) {
      const auto g = shell_point(prm.p, i);
      EXPECT_NEAR(walk_pmf(law, 1, g), pmf_generator(law, g), 1e-15) << "p=" << prm.p << " i=" << i;
    }
  }
}

// The full return probability is 2/7: the leading term (1 - 3/2)^2 = 1/4 is
// only the first summand of the series.
TEST(Walk, TwoStepReturnProbability) {
  EXPECT_NEAR(walk_pmf(kDyadic, 2, GroupElement::identity(2, 0)), 2.0 / 7.0, 1e-15);
  // Independent route: sum_i q_i^2 / |shell i|.
  double direct = 0;
  for (int i = 1; i <= 60; ++i) direct += shell_prob(kDyadic, i) * shell_prob(kDyadic, i) / shell_cardinality(2, i);
  EXPECT_NEAR(direct, 2.0 / 7.0, 1e-15);
}

TEST(Walk, TwoStepShellOneSeries) {
  double s = 0;
  for (int i = 1; i <= 80; ++i) {
    const double a = 1 - 1.5 * std::pow(2.0, -i);
    const double b = 1 - 1.5 * std::pow(2.0, -i + 1);
    s += (a * a - b * b) * std::pow(2.0, -i);
  }
  EXPECT_NEAR(walk_pmf(kDyadic, 2, shell_point(2, 1)), s, 1e-15);
}

TEST(Walk, RadialLawEdgeCases) {
  const RadialLaw dirac = walk_radial_law(kDyadic, 0, 5);
  EXPECT_EQ(dirac.shell_mass[0], 1.0);
  EXPECT_EQ(dirac.stored_mass(), 1.0);
  const RadialLaw one = walk_radial_law(kDyadic, 1, 10);
  EXPECT_NEAR(one.shell_mass[0], 0.0, 1e-16);
  for (int i = 1; i <= 10; ++i) EXPECT_NEAR(one.shell_mass[static_cast<std::size_t>(i)], shell_prob(kDyadic, i), 1e-15);
  EXPECT_THROW(walk_radial_law(kDyadic, 1, -1), std::domain_error);
}

TEST(Walk, RadialLawNormalizes) {
  for (const auto& prm : {PrimeParams{2, 1.0, 1.0}, PrimeParams{3, 2.0, 1.0}, PrimeParams{5, 0.5, 1.0}}) {
    const GeneratorLaw law(prm);
    for (std::int64_t n : {1, 2, 7, 100, 10000}) {
      const RadialLaw rl = walk_radial_law(law, n, 30);
      EXPECT_NEAR(rl.stored_mass() + rl.tail, 1.0, 1e-12) << "p=" << prm.p << " n=" << n;
      EXPECT_GE(rl.tail, -1e-15);
    }
  }
}

TEST(Walk, BallMassMatchesShellSum) {
  const GeneratorLaw law({3, 1.0, 1.0});
  const RadialLaw rl = walk_radial_law(law, 5, 12);
  double inner = 0;
  for (int i = 0; i <= 4; ++i) inner += rl.shell_mass[static_cast<std::size_t>(i)];
  EXPECT_NEAR(walk_ball_mass(law, 5, 4).value, inner, 1e-14);
}

TEST(Walk, RadialLawCsv) {
  std::ostringstream out;
  walk_radial_law(kDyadic, 2, 2).write_csv(out);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "shell_index,radius,shell_mass,per_point_mass,tail_bound");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(Multiplier, Examples) {
  const auto s4 = time_step(kDyadic, 4);
  EXPECT_NEAR(s4.lambda, 32.0 / 3.0, 1e-14);
  EXPECT_NEAR(em_multiplier(s4, kDyadic, 1.0, AbsValue::power(0)), std::pow(29.0 / 32.0, 10), 1e-15);
  EXPECT_EQ(em_multiplier(s4, kDyadic, 0.5 * s4.tau, AbsValue::power(4)), 1.0);
  EXPECT_EQ(em_multiplier(s4, kDyadic, 1.0, AbsValue::power(5)), 0.0);
}

TEST(Multiplier, LimitCharfnExamples) {
  const PrimeParams prm{2, 1.0, 1.0};
  EXPECT_EQ(limit_charfn(prm, 0.0, AbsValue::power(3)), 1.0);
  EXPECT_EQ(limit_charfn(prm, 2.0, AbsValue::zero()), 1.0);
  EXPECT_NEAR(limit_charfn(prm, 1.0, AbsValue::power(1)), std::exp(-2.0), 1e-16);
}

TEST(Multiplier, SupGapShrinks) {
  double prev = 1.0;
  for (int m = 2; m <= 10; ++m) {
    const double gap = charfn_sup_gap(kDyadic, m, 1.0, 12);
    EXPECT_LE(gap, prev) << "m=" << m;
    prev = gap;
  }
  EXPECT_LT(prev, 1e-3);
  EXPECT_NEAR(charfn_sup_gap(kDyadic, 4, 1.0), 0.012195687928992616, 1e-12);
  EXPECT_NEAR(charfn_sup_gap(kDyadic, 10, 1.0), 0.00018518098239628245, 1e-12);
}

TEST(Limit, DensityMatchesBallDifferences) {
  const PrimeParams prm{2, 1.0, 1.0};
  const double inner = ball_prob_limit(prm, 1.0, -1).value;
  const double outer = ball_prob_limit(prm, 1.0, 0).value;
  const double dens = limit_density(prm, 1.0, AbsValue::power(0)).value;
  // The unit sphere has Haar measure 1 - 1/p.
  EXPECT_NEAR(outer - inner, dens * 0.5, 1e-13);
  double series = 0;
  for (int k = 0; k >= -80; --k) series += std::ldexp(1.0, k) * (std::exp(-std::ldexp(1.0, k)) - std::exp(-std::ldexp(1.0, k + 1)));
  EXPECT_NEAR(dens, series, 1e-13);
}

TEST(Limit, BallProbabilityExamples) {
  const PrimeParams prm{2, 1.0, 1.0};
  const SeriesValue z2 = ball_prob_limit(prm, 1.0, 0);
  EXPECT_NEAR(z2.value, 0.54804279152957049, 1e-12);
  EXPECT_LT(z2.tail_bound, 1e-12);
  EXPECT_NEAR(ball_prob_limit(prm, 1.0, 60).value, 1.0, 1e-12);
  EXPECT_GT(ball_prob_limit(prm, 1e-6, 0).value, 0.999);
  EXPECT_LT(ball_prob_limit(prm, 1000.0, 0).value, 0.05);
  EXPECT_THROW(ball_prob_limit(prm, 0.0, 0), std::domain_error);
}

TEST(Limit, DensityIsNormalized) {
  const PrimeParams prm{3, 1.5, 2.0};
  // Mass of the sphere of radius p^k is density * (p - 1) p^(k - 1).
  double total = 0;
  for (int k = -60; k <= 60; ++k) total += limit_density(prm, 0.7, AbsValue::power(k)).value * 2.0 * std::pow(3.0, k - 1);
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Schedule, Examples) {
  const GeneratorLaw unit({2, 1.0, 1.5});
  const auto s0 = time_step(unit, 0);
  EXPECT_DOUBLE_EQ(s0.lambda, 1.0);
  EXPECT_DOUBLE_EQ(s0.tau, 1.0);
  for (int m = 0; m <= 6; ++m) EXPECT_NEAR(time_step(kDyadic, m).lambda, (2.0 / 3.0) * std::ldexp(1.0, m), 1e-12);
  const GeneratorLaw law32({3, 2.0, 2.0});
  EXPECT_NEAR(law32.alpha(), 1.5 * (1.0 - 1.0 / 27.0), 1e-15);
  EXPECT_NEAR(time_step(law32, 1).lambda, 2.0 / law32.alpha() * 9.0, 1e-12);
  EXPECT_THROW(time_step(kDyadic, -1), std::domain_error);
}

TEST(Schedule, StepIndexBrackets) {
  for (int m = 0; m <= 8; ++m) {
    const auto s = time_step(kDyadic, m);
    for (std::int64_t n = 0; n < 400; ++n) {
      const double t = s.jump_time(n);
      EXPECT_EQ(s.step_index(t), n);
      EXPECT_EQ(s.step_index(std::nextafter(t, -1.0) < 0 ? 0.0 : std::nextafter(t, -1.0)), n == 0 ? 0 : n - 1);
    }
  }
}

TEST(Moments, BoundConstantExamples) {
  const GeneratorLaw law22({2, 2.0, 1.0});
  EXPECT_NEAR(moment_bound_K(law22, 1.0), 2.0 * (1.0 + 2.0 * std::sqrt(law22.alpha()) * std::sqrt(std::numbers::pi)) * (1 + 1e-6), 1e-12);
  EXPECT_NEAR(moment_bound_K(law22, 1.0), 11.378955578613702, 1e-12);
  EXPECT_NEAR(moment_bound_K(law22, 1e-12), 4.000004, 1e-9);
  EXPECT_THROW(moment_bound_K(law22, 2.0), std::domain_error);
}

TEST(Moments, OneStepClosedForm) {
  const GeneratorLaw law22({2, 2.0, 1.0});
  EXPECT_NEAR(walk_moment(law22, 1, 1.0).value, 3.0, 1e-12);
  for (const auto& prm : {PrimeParams{3, 1.0, 1.0}, PrimeParams{5, 0.5, 1.0}}) {
    const GeneratorLaw law(prm);
    const double r = prm.b / 2;
    const double pb = std::pow(prm.p, prm.b);
    const double expected = (pb - 1) * std::pow(prm.p, -(prm.b - r)) / (1 - std::pow(prm.p, -(prm.b - r)));
    EXPECT_NEAR(walk_moment(law, 1, r).value, expected, 1e-11 * expected);
  }
}

TEST(Moments, AgreeWithRadialLaw) {
  const GeneratorLaw law({3, 1.0, 1.0});
  for (std::int64_t n : {2, 9, 50}) {
    const RadialLaw rl = walk_radial_law(law, n, 120);
    EXPECT_NEAR(walk_moment(law, n, 0.5).value, rl.partial_moment(0.5), 1e-10);
  }
}

TEST(Moments, BoundsHoldOnDefaultGrid) {
  const auto ns = log_spaced_steps(1, 10000, 25);
  for (const auto& prm : {PrimeParams{2, 1.0, 1.0}, PrimeParams{3, 1.0, 1.0}, PrimeParams{2, 2.0, 1.0}, PrimeParams{5, 0.5, 1.0}}) {
    const GeneratorLaw law(prm);
    for (double r : {prm.b / 2, 0.9 * prm.b}) {
      const auto res = moment_check(law, r, ns, {0, 4, 8}, {0.1, 1.0, 10.0});
      EXPECT_TRUE(res.passed) << "p=" << prm.p << " b=" << prm.b << " r=" << r;
    }
  }
}

TEST(Moments, EmbeddedBeforeFirstJumpIsZero) {
  const auto s = time_step(kDyadic, 3);
  const auto res = moment_check(kDyadic, 0.5, {}, {3}, {0.5 * s.tau});
  ASSERT_TRUE(res.passed);
  EXPECT_EQ(std::get<double>(res.table.rows.at(0).at(4)), 0.0);
}

TEST(Moments, Dyadic1000Steps) {
  const double K = moment_bound_K(kDyadic, 0.5);
  EXPECT_LT(walk_moment(kDyadic, 1000, 0.5).upper(), K * std::sqrt(1000.0));
}
