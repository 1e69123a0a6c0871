#include <gtest/gtest.h>

#include <cmath>

#include "mvbandit/bounds.hpp"
#include "mvbandit/oracles.hpp"

using namespace mvbandit;

namespace {

PolicyKind kind_of(PolicyTag tag) {
  PolicyKind k;
  k.tag = tag;
  return k;
}

BanditInstance two_arm() {
  return BanditInstance::gaussian({{0.5, 0.1}, {0.4, 0.3}}, 0.01);
}

}  // namespace

TEST(H, Examples) {
  EXPECT_EQ(h(1.0), 0.0);
  EXPECT_NEAR(h(2.0), 0.153426, 1e-6);
  EXPECT_NEAR(h(2.0), (1.0 - std::log(2.0)) / 2.0, 1e-15);
  EXPECT_NEAR(h(0.5), 0.096574, 1e-6);
  EXPECT_NEAR(h(3.0), 0.450694, 1e-6);
  EXPECT_THROW(h(0.0), std::domain_error);
  EXPECT_THROW(h(-1.0), std::domain_error);
}

TEST(H, ConvexAndPositive) {
  for (int i = 1; i <= 400; ++i) {
    const double x = 0.025 * i;
    if (x != 1.0) EXPECT_GT(h(x), 0.0) << x;
    const double y = x + 0.37;
    EXPECT_LE(h((x + y) / 2.0), (h(x) + h(y)) / 2.0 + 1e-15);
  }
}

TEST(GammaTail, LowerExamples) {
  EXPECT_NEAR(gamma_tail_lower(2, 1, 1), 2.0 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(gamma_tail_lower(2, 1, 1), 0.735759, 1e-6);
  EXPECT_NEAR(gamma_tail_lower(3, 1, 2), 4.5 * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(gamma_tail_lower(3, 1, 2), 0.609009, 1e-6);
  EXPECT_LE(gamma_tail_lower(3, 1, 2), oracle::erlang_ccdf(3, 1, 2));
  EXPECT_NEAR(oracle::erlang_ccdf(3, 1, 2), 0.676676, 1e-6);
  EXPECT_NEAR(gamma_tail_lower(2, 2, 0.5), 0.735759, 1e-6);
}

TEST(GammaTail, UpperExamples) {
  EXPECT_NEAR(gamma_tail_upper(2, 1, 4), std::exp(-4.0 * h(2.0)), 1e-15);
  EXPECT_NEAR(gamma_tail_upper(2, 1, 4), 0.541341, 1e-6);
  EXPECT_NEAR(oracle::erlang_ccdf(2, 1, 4), 0.091578, 1e-6);
  EXPECT_GE(gamma_tail_upper(2, 1, 4), oracle::erlang_ccdf(2, 1, 4));
  EXPECT_NEAR(gamma_tail_upper(2, 1, 2.0 + 1e-12), 1.0, 1e-12);
  EXPECT_NEAR(h(1.5), 0.0472674, 1e-7);
  EXPECT_NEAR(gamma_tail_upper(4, 2, 3), std::exp(-8.0 * h(1.5)), 1e-15);
  EXPECT_NEAR(gamma_tail_upper(4, 2, 3), 0.685135, 1e-6);
  EXPECT_NEAR(oracle::erlang_ccdf(4, 2, 3), 0.151204, 1e-6);
  EXPECT_GE(gamma_tail_upper(4, 2, 3), oracle::erlang_ccdf(4, 2, 3));
}

TEST(GammaTail, HypothesisErrors) {
  EXPECT_THROW(gamma_tail_lower(1.5, 1, 1), std::domain_error);
  EXPECT_THROW(gamma_tail_lower(2, 0, 1), std::domain_error);
  EXPECT_THROW(gamma_tail_lower(2, 1, 0), std::domain_error);
  EXPECT_THROW(gamma_tail_upper(2, 1, 2), std::domain_error);
  EXPECT_THROW(gamma_tail_upper(2, 1, 1), std::domain_error);
}

TEST(GammaTail, QuadratureOracleAgreesWithErlang) {
  for (int a = 1; a <= 10; ++a) {
    for (double x : {0.5, 2.0, 7.5, 20.0}) {
      EXPECT_NEAR(oracle::gamma_ccdf_quadrature(a, 1.5, x), oracle::erlang_ccdf(a, 1.5, x),
                  1e-12);
    }
  }
}

TEST(Coefficient, MvtsTwoArm) {
  const auto r = asymptotic_regret_coefficient(kind_of(PolicyTag::mvts), two_arm());
  EXPECT_EQ(r.best_arm, 0u);
  EXPECT_EQ(r.per_arm[0], 0.0);
  EXPECT_NEAR(r.per_arm[1], 44.2, 1e-9);
  EXPECT_NEAR(r.total, 44.2, 1e-9);
}

TEST(Coefficient, VtsTwoArm) {
  const auto r = asymptotic_regret_coefficient(kind_of(PolicyTag::vts), two_arm());
  EXPECT_NEAR(r.total, 0.490355, 1e-6);
}

TEST(Coefficient, MtsTwoArm) {
  // rho Gamma = 0.001 < sigma_1^2 = 0.1: hypothesis fails but the value is finite.
  const auto r = asymptotic_regret_coefficient(kind_of(PolicyTag::mts), two_arm());
  EXPECT_FALSE(r.assumptions_ok[1]);
  const double margin = 0.01 * 0.1 - 0.1;
  EXPECT_NEAR(r.total, 2.0 * 1e-4 / (margin * margin) * 0.221, 1e-12);
  const auto big = asymptotic_regret_coefficient(kind_of(PolicyTag::mts), two_arm().with_rho(10));
  EXPECT_TRUE(big.assumptions_ok[1]);
}

TEST(Coefficient, BmvtsNormalizesBestArm) {
  const auto inst = BanditInstance::bernoulli({{0.2}, {0.6}}, 0.5);
  const auto r = asymptotic_regret_coefficient(kind_of(PolicyTag::bmvts), inst);
  EXPECT_EQ(r.best_arm, 1u);
  EXPECT_NEAR(r.per_arm[0], 0.44 / 0.18, 1e-12);
  EXPECT_NEAR(r.total, 2.444, 1e-3);
  EXPECT_TRUE(r.assumptions_ok[0]);
  const auto out = asymptotic_regret_coefficient(kind_of(PolicyTag::bmvts), inst.with_rho(1.5));
  EXPECT_FALSE(out.assumptions_ok[0]);
}

TEST(Coefficient, ArmOrderIrrelevant) {
  const auto a = BanditInstance::gaussian({{0.5, 0.1}, {0.4, 0.3}, {0.2, 0.5}}, 0.5);
  const auto b = BanditInstance::gaussian({{0.2, 0.5}, {0.4, 0.3}, {0.5, 0.1}}, 0.5);
  for (auto tag : {PolicyTag::mts, PolicyTag::vts, PolicyTag::mvts}) {
    const auto ra = asymptotic_regret_coefficient(kind_of(tag), a);
    const auto rb = asymptotic_regret_coefficient(kind_of(tag), b);
    EXPECT_NEAR(ra.total, rb.total, 1e-12 * ra.total);
    EXPECT_NEAR(ra.per_arm[1], rb.per_arm[1], 1e-12 * ra.total);
    EXPECT_NEAR(ra.per_arm[2], rb.per_arm[0], 1e-12 * ra.total);
  }
}

TEST(Coefficient, DegenerateGapIsInfiniteWithNote) {
  const auto inst = BanditInstance::gaussian({{0.5, 0.1}, {0.5, 0.1}, {0.2, 0.3}}, 1.0);
  const auto r = asymptotic_regret_coefficient(kind_of(PolicyTag::mvts), inst);
  EXPECT_TRUE(std::isinf(r.per_arm[1]));
  EXPECT_TRUE(std::isinf(r.total));
  EXPECT_FALSE(r.notes.empty());
  EXPECT_EQ(to_json(r).at("total_coefficient"), "inf");
}

TEST(Coefficient, MvtsDominatesVtsAndMeanTerm) {
  for (double rho : {1e-3, 0.1, 1.0, 30.0}) {
    const auto inst = load_instance(MVBANDIT_DATA_DIR "/gaussian15.json").with_rho(rho);
    const auto gaps = gap_table(inst);
    const auto mv = asymptotic_regret_coefficient(kind_of(PolicyTag::mvts), inst);
    const auto vt = asymptotic_regret_coefficient(kind_of(PolicyTag::vts), inst);
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (i == gaps.best_arm) continue;
      EXPECT_GE(mv.per_arm[i], vt.per_arm[i]);
      const double g = inst.mean(gaps.best_arm) - inst.mean(i);
      const double mean_term = 2.0 / (g * g) * (gaps.delta[i] + 2.0 * gaps.gamma_max2[i]);
      EXPECT_GE(mv.per_arm[i], mean_term);
    }
  }
}

TEST(Coefficient, VarianceRatioScaleInvariance) {
  for (double c : {0.01, 0.5, 3.0, 100.0}) {
    for (double s1 : {0.05, 0.24, 0.85}) {
      for (double si : {0.09, 0.53, 0.72}) {
        EXPECT_NEAR(h((c * si) / (c * s1)), h(si / s1), 1e-12);
      }
    }
  }
}

TEST(Coefficient, LimitRows) {
  const auto inst = two_arm();
  const auto r = asymptotic_regret_coefficient(kind_of(PolicyTag::mvts), inst);
  ASSERT_TRUE(r.limit_rho_inf.has_value());
  ASSERT_TRUE(r.limit_rho_0.has_value());
  EXPECT_NEAR(*r.limit_rho_inf, 2.0 / 0.1, 1e-9);
  EXPECT_NEAR(*r.limit_rho_0, (0.3 - 0.1 + 0.02) / h(3.0), 1e-9);
  const auto b = asymptotic_regret_coefficient(
      kind_of(PolicyTag::bmvts), BanditInstance::bernoulli({{0.2}, {0.6}}, 0.5));
  EXPECT_FALSE(b.limit_rho_inf.has_value());
}

TEST(Coefficient, Errors) {
  EXPECT_THROW(asymptotic_regret_coefficient(kind_of(PolicyTag::mv_lcb_gaussian), two_arm()),
               ConfigError);
  EXPECT_THROW(asymptotic_regret_coefficient(kind_of(PolicyTag::bmvts), two_arm()),
               ConfigError);
}
