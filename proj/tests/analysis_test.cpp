#include "tauca/analysis.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_set>

namespace tauca {
namespace {

TEST(PowerLawTest, RecoversExactLaws) {
  const std::vector<double> xs{100, 200, 400, 800};
  for (double k : {-1.0, -2.0, 0.5}) {
    std::vector<double> es;
    for (double x : xs) es.push_back(3.5 * std::pow(x, k));
    const PowerLaw fit = fit_power_law(xs, es);
    EXPECT_NEAR(fit.exponent, k, 1e-12);
    EXPECT_NEAR(fit.constant, 3.5, 1e-9);
  }
}

TEST(PowerLawTest, DegenerateInputs) {
  const std::vector<double> xs{1, 2, 4};
  EXPECT_THROW(fit_power_law(xs, std::vector<double>{1, 0, 1}), DegenerateFitError);
  EXPECT_THROW(fit_power_law(std::vector<double>{1, 2}, std::vector<double>{1, 1}), DegenerateFitError);
  EXPECT_THROW(fit_power_law(std::vector<double>{0, 2, 4}, std::vector<double>{1, 1, 1}), DegenerateFitError);
  EXPECT_THROW(fit_power_law(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}), DegenerateFitError);
  EXPECT_THROW(fit_power_law(xs, std::vector<double>{1, 2}), DegenerateFitError);
}

TEST(ReportTest, ZerosAreSkippedAndShortReportsStayUnfitted) {
  ErrorReport r{{1, 2, 4, 8}, {1.0, 0.0, 0.25, 0.125}};
  fit_report(r);
  EXPECT_NEAR(r.exponent, -1.0, 1e-12);

  ErrorReport short_one{{1, 2}, {1.0, 0.5}};
  fit_report(short_one);
  EXPECT_TRUE(std::isnan(short_one.exponent));
  std::ostringstream out;
  write_report_csv(out, short_one);
  EXPECT_EQ(out.str(), "x,error\n1,1\n2,0.5\n# exponent=nan constant=nan\n");
}

TEST(LlnTest, ExactExpectationGivesZeroError) {
  const std::vector<double> c(64, 0.25);
  const auto rep = lln_error_from(c, c, 0.01);
  EXPECT_EQ(rep.zero_points, 7u);  // n = 1, 2, ..., 64
  EXPECT_TRUE(std::isnan(rep.report.exponent));
  EXPECT_EQ(rep.bound_constant, 0.0);
}

TEST(LlnTest, SingleEarlyCarryDecaysAsOneOverN) {
  std::vector<double> c(1024, 0.0);
  c[0] = 1.0;
  const std::vector<double> e(1024, 0.0);
  const auto rep = lln_error_from(c, e, 0.01);
  ASSERT_EQ(rep.report.xs.size(), 11u);
  for (std::size_t i = 0; i < rep.report.xs.size(); ++i) EXPECT_DOUBLE_EQ(rep.report.errors[i], 1.0 / rep.report.xs[i]);
  EXPECT_NEAR(rep.report.exponent, -1.0, 1e-12);
  EXPECT_NEAR(rep.report.constant, 1.0, 1e-12);
  EXPECT_NEAR(rep.bound_constant, 0.0, 1e-12);
}

TEST(LlnTest, BiasShowsUpInTheBoundConstant) {
  const std::vector<double> c(256, 0.5);
  const std::vector<double> e(256, 0.49);
  const auto rep = lln_error_from(c, e, 0.01);
  EXPECT_NEAR(rep.bound_constant, 1.0 - 1.0 / 256 / 0.01, 1e-9);
}

TEST(LlnTest, Errors) {
  EXPECT_THROW(lln_error_from({}, {}, 0.01), EmptyTraceError);
  const std::vector<double> a{1.0}, b{1.0, 2.0};
  EXPECT_THROW(lln_error_from(a, b, 0.01), RangeError);
  EXPECT_THROW(lln_error(run(system4(), TauRadix(100, 3), 0)), EmptyTraceError);
}

TEST(LlnTest, MachineTraceAveragesToTheExpectedCarry) {
  const auto rep = lln_error(run(system4(), TauRadix(100, 3), 10000));
  ASSERT_EQ(rep.report.xs.size(), 14u);
  EXPECT_EQ(rep.report.xs.back(), 8192.0);
  // The tail is well under the 1/n + tau envelope.
  EXPECT_LT(rep.report.errors.back(), 1.0 / 8192 + 0.01);
  EXPECT_LT(rep.bound_constant, 1.0);  // measured 0.898
  const auto rep_v = lln_error(run(system4(), TauRadix(100, 3), 2000), 1);
  EXPECT_LT(rep_v.report.errors.back(), 0.05);
}

TEST(LcgTest, MinimalStandardValues) {
  const auto xs = lcg_stream(LcgParams::minimal_standard(1), 3);
  EXPECT_EQ(xs, (std::vector<std::uint64_t>{16807, 282475249, 1622650073}));
}

TEST(LcgTest, AgreesWithTheStandardLibrary) {
  const auto xs = lcg_stream(LcgParams::minimal_standard(42), 20000);
  std::minstd_rand0 ref(42);
  for (auto x : xs) ASSERT_EQ(x, ref());
}

TEST(LcgTest, NoRepeatInTheFirstHundredThousand) {
  const auto xs = lcg_stream(LcgParams::minimal_standard(1), 100000);
  std::unordered_set<std::uint64_t> seen(xs.begin(), xs.end());
  EXPECT_EQ(seen.size(), xs.size());
  EXPECT_TRUE(std::all_of(xs.begin(), xs.end(), [](auto x) { return x > 0 && x < 2147483647u; }));
}

TEST(LcgTest, FullPeriodSmallGenerator) {
  const LcgParams p{5, 3, 16, 0};
  const auto xs = lcg_stream(p, 32);
  std::unordered_set<std::uint64_t> first(xs.begin(), xs.begin() + 16);
  EXPECT_EQ(first.size(), 16u);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(xs[i], xs[i + 16]);
}

TEST(LcgTest, InvalidParameters) {
  EXPECT_THROW(lcg_stream(LcgParams{16807, 0, 1, 0}, 1), RangeError);
  EXPECT_THROW(lcg_stream(LcgParams{20, 0, 16, 1}, 1), RangeError);
  EXPECT_THROW(lcg_stream(LcgParams{5, 3, 16, 16}, 1), RangeError);
}

TEST(MomentsTest, SmallSamples) {
  const std::vector<double> two{0.0, 1.0};
  const auto m = moment_stats(two);
  EXPECT_DOUBLE_EQ(m.mean, 0.5);
  EXPECT_DOUBLE_EQ(m.variance, 0.5);
  EXPECT_THROW(moment_stats(std::vector<double>{1.0}), RangeError);
}

TEST(MomentsTest, MinimalStandardLooksUniform) {
  const auto xs = normalize(lcg_stream(LcgParams::minimal_standard(1), 1000000), 2147483647);
  const auto m = moment_stats(xs);
  EXPECT_NEAR(m.mean, 0.5, 1e-3);
  EXPECT_NEAR(m.variance, 1.0 / 12.0, 1e-3);
}

TEST(CurveErrorTest, ZeroOnTheReferenceNodesAndRangeChecks) {
  const auto ref = rk4_solve<double>(system4(), 1.0, 0.01);
  CaCurve c{100, Variant::full, {}};
  for (std::size_t i = 0; i < ref.size(); ++i) {
    c.points.push_back(CaPoint{static_cast<std::int64_t>(i), 0.0, ref.times[i], ref.states[i][0], ref.states[i][1]});
  }
  EXPECT_EQ(curve_error(c, ref, 1.0), 0.0);
  const std::vector<double> grid{0.0, 0.5, 1.0};
  EXPECT_EQ(grid_error(c, ref, grid), 0.0);

  c.points[10].v += 0.003;
  c.points[10].u += 0.004;
  EXPECT_NEAR(curve_error(c, ref, 1.0), 0.005, 1e-15);
  EXPECT_EQ(curve_error(c, ref, 0.05), 0.0);

  const auto shorter = rk4_solve<double>(system4(), 0.5, 0.01);
  EXPECT_THROW(curve_error(c, shorter, 1.0), GridError);
  c.points.resize(20);
  EXPECT_THROW(curve_error(c, ref, 1.0), GridError);
}

}  // namespace
}  // namespace tauca
