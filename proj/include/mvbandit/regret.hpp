#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mvbandit/env.hpp"
#include "mvbandit/stats.hpp"

namespace mvbandit {

/// Arms pulled and rewards observed over n rounds.
struct RunTrace {
  std::vector<std::size_t> arms;
  std::vector<double> rewards;
  std::vector<std::uint64_t> pull_counts;

  /// Builds a trace over `num_arms` arms, deriving the pull counts.
  static RunTrace from(std::vector<std::size_t> arms, std::vector<double> rewards,
                       std::size_t num_arms);

  std::size_t rounds() const { return arms.size(); }
};

/// Regret of one trace and its two-term decomposition, plus the two terms of
/// the pseudo-regret.
struct RegretBreakdown {
  double realized_regret = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double pseudo_first = 0.0;
  double pseudo_cross = 0.0;

  double pseudo_regret() const { return pseudo_first + pseudo_cross; }
};

/// rho * mean - population variance. Throws std::domain_error when empty.
double empirical_mv(std::span<const double> rewards, double rho);

RegretBreakdown realized_regret(const RunTrace& trace, const GapTable& gaps, double rho);
double pseudo_regret(const RunTrace& trace, const GapTable& gaps);
/// sum over suboptimal arms of T_i (Delta_i + 2 Gamma_{i,max}^2).
double eq10_upper(const RunTrace& trace, const GapTable& gaps);

/// Pseudo-regret terms from pull counts alone.
double pseudo_first_term(std::span<const std::uint64_t> pulls, const GapTable& gaps);
double pseudo_cross_term(std::span<const std::uint64_t> pulls, const GapTable& gaps);
double eq10_upper(std::span<const std::uint64_t> pulls, const GapTable& gaps);

/// Regret bookkeeping in O(K) memory, fed one round at a time.
class RegretAccumulator {
 public:
  explicit RegretAccumulator(std::size_t num_arms);

  void add(std::size_t arm, double reward);

  std::uint64_t rounds() const { return overall_.count(); }
  const std::vector<std::uint64_t>& pulls() const { return pulls_; }

  RegretBreakdown breakdown(const GapTable& gaps, double rho) const;
  double eq10_upper(const GapTable& gaps) const;

 private:
  RunningStat overall_;
  std::vector<RunningStat> per_arm_;
  std::vector<std::uint64_t> pulls_;
};

}  // namespace mvbandit
