#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include "mvbandit/bounds.hpp"
#include "mvbandit/selfcheck.hpp"

using namespace mvbandit;

TEST(Selfcheck, QuickPassesWithinBudget) {
  const auto start = std::chrono::steady_clock::now();
  SelfcheckOptions options;
  options.quick = true;
  const auto report = selfcheck(options);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream out;
  report.print(out);
  EXPECT_TRUE(report.all_passed()) << out.str();
  EXPECT_LT(seconds, 30.0);
  EXPECT_EQ(report.checks.size(), 8u);
}

TEST(Selfcheck, FlippedHSignFailsSandwich) {
  const HFunction flipped = [](double x) { return -h(x); };
  EXPECT_FALSE(check_tail_sandwich(flipped).passed);
  EXPECT_FALSE(check_h_properties(flipped).passed);
  const HFunction good = [](double x) { return h(x); };
  EXPECT_TRUE(check_tail_sandwich(good).passed);
  EXPECT_TRUE(check_h_properties(good).passed);
}

TEST(Selfcheck, NegativeControlFailsReport) {
  SelfcheckOptions options;
  options.quick = true;
  options.h_override = [](double x) { return -h(x); };
  const auto report = selfcheck(options);
  EXPECT_FALSE(report.all_passed());
  std::ostringstream out;
  report.print(out);
  EXPECT_NE(out.str().find("FAIL"), std::string::npos);
}

TEST(Selfcheck, RegretVsPseudoOnSmallInstance) {
  PolicyKind vts;
  vts.tag = PolicyTag::vts;
  const auto inst = BanditInstance::gaussian({{0.5, 0.1}, {0.4, 0.3}, {0.2, 0.05}}, 1.0);
  const auto r = check_regret_vs_pseudo("three_arm", vts, inst, 200, 500, 3);
  EXPECT_TRUE(r.passed) << r.detail;
}
