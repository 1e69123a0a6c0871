#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mvbandit/oracles.hpp"
#include "mvbandit/regret.hpp"

using namespace mvbandit;

namespace {

BanditInstance two_arm(double rho) {
  return BanditInstance::gaussian({{0.5, 0.1}, {0.4, 0.3}}, rho);
}

}  // namespace

TEST(EmpiricalMv, Examples) {
  EXPECT_EQ(empirical_mv(std::vector<double>{1.0, 1.0}, 1.0), 1.0);
  EXPECT_EQ(empirical_mv(std::vector<double>{0.0, 1.0}, 1.0), 0.25);
  EXPECT_EQ(empirical_mv(std::vector<double>{2.0}, 0.5), 1.0);
  EXPECT_THROW(empirical_mv(std::vector<double>{}, 1.0), std::domain_error);
}

TEST(RealizedRegret, DegenerateBestArmTrace) {
  const auto inst = two_arm(1.0);
  const auto gaps = gap_table(inst);
  const std::size_t n = 10;
  const auto trace = RunTrace::from(std::vector<std::size_t>(n, 0),
                                    std::vector<double>(n, 0.5), 2);
  const auto r = realized_regret(trace, gaps, 1.0);
  EXPECT_NEAR(r.realized_regret, -1.0, 1e-12);
  EXPECT_NEAR(r.r1, -1.0, 1e-12);
  EXPECT_EQ(r.r2, 0.0);
  EXPECT_EQ(r.pseudo_regret(), 0.0);
  EXPECT_EQ(eq10_upper(trace, gaps), 0.0);
}

TEST(RealizedRegret, TwoRoundZeroRho) {
  const auto inst = two_arm(0.0);
  const auto trace = RunTrace::from({0, 1}, {0.0, 0.0}, 2);
  const auto r = realized_regret(trace, gap_table(inst), 0.0);
  EXPECT_NEAR(r.realized_regret, -0.2, 1e-15);
  EXPECT_NEAR(r.r1 + r.r2, -0.2, 1e-15);
}

TEST(PseudoRegret, TwoArmExample) {
  const auto gaps = gap_table(two_arm(0.01));
  ASSERT_NEAR(gaps.delta[1], 0.201, 1e-15);
  const auto trace = RunTrace::from({0, 1}, {0.3, 0.7}, 2);
  const auto r = realized_regret(trace, gaps, 0.01);
  EXPECT_NEAR(r.pseudo_first, 0.201, 1e-15);
  EXPECT_NEAR(r.pseudo_cross, 0.01, 1e-15);
  EXPECT_NEAR(pseudo_regret(trace, gaps), 0.211, 1e-15);
  EXPECT_NEAR(eq10_upper(trace, gaps), 0.221, 1e-15);
  EXPECT_LE(pseudo_regret(trace, gaps), eq10_upper(trace, gaps));
}

TEST(PseudoRegret, RoundRobinClosedForm) {
  const auto inst = load_instance(MVBANDIT_DATA_DIR "/gaussian15.json");
  const auto gaps = gap_table(inst);
  const std::size_t k = inst.size();
  std::vector<std::size_t> arms(k);
  for (std::size_t i = 0; i < k; ++i) arms[i] = i;
  const auto trace = RunTrace::from(arms, std::vector<double>(k, 0.0), k);
  double first = 0.0, cross = 0.0, upper = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (i == gaps.best_arm) continue;
    first += gaps.delta[i];
    upper += gaps.delta[i] + 2.0 * gaps.gamma_max2[i];
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j) cross += gaps.gamma[i][j] * gaps.gamma[i][j];
    }
  }
  cross /= static_cast<double>(k);
  EXPECT_NEAR(pseudo_regret(trace, gaps), first + cross, 1e-12);
  EXPECT_NEAR(eq10_upper(trace, gaps), upper, 1e-12);
  EXPECT_LE(pseudo_regret(trace, gaps), eq10_upper(trace, gaps));
}

TEST(RunTrace, Validation) {
  EXPECT_THROW(RunTrace::from({0, 1}, {0.0}, 2), std::domain_error);
  EXPECT_THROW(RunTrace::from({0, 2}, {0.0, 0.0}, 2), std::domain_error);
  const auto t = RunTrace::from({1, 1, 0}, {0.0, 0.0, 0.0}, 3);
  EXPECT_EQ(t.pull_counts, (std::vector<std::uint64_t>{1, 2, 0}));
  const auto gaps = gap_table(two_arm(1.0));
  EXPECT_THROW(realized_regret(t, gaps, 1.0), std::domain_error);
}

TEST(RealizedRegret, DecompositionOnRandomTraces) {
  std::mt19937_64 gen(31);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto inst = load_instance(MVBANDIT_DATA_DIR "/gaussian15.json");
  for (double rho : {0.0, 0.01, 1.0, 50.0}) {
    const auto gaps = gap_table(inst.with_rho(rho));
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 1 + gen() % 60;
      std::vector<std::size_t> arms(n);
      std::vector<double> rewards(n);
      for (std::size_t t = 0; t < n; ++t) {
        arms[t] = gen() % 4;  // leaves most arms unpulled
        rewards[t] = inst.mean(arms[t]) + std::sqrt(inst.variance(arms[t])) * normal(gen);
      }
      const auto trace = RunTrace::from(arms, rewards, inst.size());
      const auto r = realized_regret(trace, gaps, rho);
      EXPECT_GE(r.r2, 0.0);
      const double scale = std::max(1.0, std::abs(r.r1) + std::abs(r.r2));
      EXPECT_NEAR(r.realized_regret, r.r1 + r.r2, 1e-9 * scale);
      EXPECT_LE(r.pseudo_regret(), eq10_upper(trace, gaps) * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST(RealizedRegret, VarianceDecompositionIdentity) {
  std::mt19937_64 gen(77);
  std::normal_distribution<double> normal(0.2, 1.5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + gen() % 5;
    const std::size_t n = 2 + gen() % 100;
    std::vector<std::size_t> arms(n);
    std::vector<double> rewards(n);
    for (std::size_t t = 0; t < n; ++t) {
      arms[t] = gen() % k;
      rewards[t] = normal(gen) + static_cast<double>(arms[t]);
    }
    // total population variance vs within + between, every sum exact
    const double nn = static_cast<double>(n);
    const double mean = oracle::exact_sum(rewards) / nn;
    std::vector<double> sq;
    for (double x : rewards) sq.push_back((x - mean) * (x - mean));
    const double total = oracle::exact_sum(sq) / nn;
    std::vector<double> parts;
    for (std::size_t a = 0; a < k; ++a) {
      std::vector<double> xs;
      for (std::size_t t = 0; t < n; ++t) {
        if (arms[t] == a) xs.push_back(rewards[t]);
      }
      if (xs.empty()) continue;
      const double m = oracle::exact_sum(xs) / static_cast<double>(xs.size());
      for (double x : xs) parts.push_back((x - m) * (x - m));
      parts.push_back(static_cast<double>(xs.size()) * (m - mean) * (m - mean));
    }
    const double decomposed = oracle::exact_sum(parts) / nn;
    EXPECT_NEAR(decomposed, total, 1e-9 * total);
    // The library's empirical MV agrees with the exact route.
    EXPECT_NEAR(empirical_mv(rewards, 0.0), -total, 1e-9 * total);
  }
}

TEST(RegretAccumulator, MatchesTraceFunctions) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto inst = load_instance(MVBANDIT_DATA_DIR "/gaussian15.json");
  const auto gaps = gap_table(inst);
  RegretAccumulator acc(inst.size());
  std::vector<std::size_t> arms;
  std::vector<double> rewards;
  for (int t = 0; t < 2000; ++t) {
    const std::size_t a = gen() % inst.size();
    const double x = inst.mean(a) + std::sqrt(inst.variance(a)) * normal(gen);
    acc.add(a, x);
    arms.push_back(a);
    rewards.push_back(x);
    if (t % 97 != 0) continue;
    const auto trace = RunTrace::from(arms, rewards, inst.size());
    const auto want = realized_regret(trace, gaps, inst.rho());
    const auto got = acc.breakdown(gaps, inst.rho());
    const double scale = std::max(1.0, std::abs(want.r1) + std::abs(want.r2));
    EXPECT_NEAR(got.realized_regret, want.realized_regret, 1e-9 * scale);
    EXPECT_NEAR(got.r1, want.r1, 1e-9 * scale);
    EXPECT_NEAR(got.r2, want.r2, 1e-9 * scale);
    EXPECT_NEAR(got.pseudo_first, want.pseudo_first, 1e-9 * scale);
    EXPECT_NEAR(got.pseudo_cross, want.pseudo_cross, 1e-9 * scale);
    EXPECT_NEAR(acc.eq10_upper(gaps), eq10_upper(trace, gaps), 1e-9 * scale);
    EXPECT_EQ(acc.pulls(), trace.pull_counts);
    EXPECT_EQ(acc.rounds(), trace.rounds());
  }
}
