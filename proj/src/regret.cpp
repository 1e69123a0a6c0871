#include "mvbandit/regret.hpp"

#include <stdexcept>

namespace mvbandit {

RunTrace RunTrace::from(std::vector<std::size_t> arms, std::vector<double> rewards,
                        std::size_t num_arms) {
  if (arms.size() != rewards.size()) {
    throw std::domain_error("trace: arms and rewards lengths differ");
  }
  RunTrace trace;
  trace.pull_counts.assign(num_arms, 0);
  for (std::size_t a : arms) {
    if (a >= num_arms) throw std::domain_error("trace: arm index out of range");
    ++trace.pull_counts[a];
  }
  trace.arms = std::move(arms);
  trace.rewards = std::move(rewards);
  return trace;
}

double empirical_mv(std::span<const double> rewards, double rho) {
  if (rewards.empty()) throw std::domain_error("empirical_mv: empty reward sequence");
  const double n = static_cast<double>(rewards.size());
  double sum = 0.0;
  for (double x : rewards) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : rewards) ss += (x - mean) * (x - mean);
  return rho * mean - ss / n;
}

namespace {

void check_trace(const RunTrace& trace, const GapTable& gaps) {
  if (trace.arms.size() != trace.rewards.size()) {
    throw std::domain_error("trace: arms and rewards lengths differ");
  }
  if (trace.pull_counts.size() != gaps.size()) {
    throw std::domain_error("trace: pull counts do not match the gap table");
  }
  std::uint64_t total = 0;
  for (auto c : trace.pull_counts) total += c;
  if (total != trace.arms.size()) {
    throw std::domain_error("trace: pull counts do not sum to the number of rounds");
  }
}

}  // namespace

double pseudo_first_term(std::span<const std::uint64_t> pulls, const GapTable& gaps) {
  double out = 0.0;
  for (std::size_t i = 0; i < pulls.size(); ++i) {
    out += static_cast<double>(pulls[i]) * gaps.delta[i];
  }
  return out;
}

double pseudo_cross_term(std::span<const std::uint64_t> pulls, const GapTable& gaps) {
  double n = 0.0;
  for (auto c : pulls) n += static_cast<double>(c);
  if (n == 0.0) return 0.0;
  double out = 0.0;
  for (std::size_t i = 0; i < pulls.size(); ++i) {
    if (pulls[i] == 0) continue;
    for (std::size_t j = 0; j < pulls.size(); ++j) {
      if (j == i) continue;
      const double g = gaps.gamma[i][j];
      out += static_cast<double>(pulls[i]) * static_cast<double>(pulls[j]) * g * g;
    }
  }
  return out / n;
}

double eq10_upper(std::span<const std::uint64_t> pulls, const GapTable& gaps) {
  double out = 0.0;
  for (std::size_t i = 0; i < pulls.size(); ++i) {
    if (i == gaps.best_arm) continue;
    out += static_cast<double>(pulls[i]) * (gaps.delta[i] + 2.0 * gaps.gamma_max2[i]);
  }
  return out;
}

RegretBreakdown realized_regret(const RunTrace& trace, const GapTable& gaps,
                                double rho) {
  check_trace(trace, gaps);
  const std::size_t k = gaps.size();
  const double n = static_cast<double>(trace.rounds());
  const double mv_best = gaps.mv[gaps.best_arm];

  RegretBreakdown out;
  out.pseudo_first = pseudo_first_term(trace.pull_counts, gaps);
  out.pseudo_cross = pseudo_cross_term(trace.pull_counts, gaps);
  if (trace.rounds() == 0) return out;

  out.realized_regret = n * (mv_best - empirical_mv(trace.rewards, rho));

  // Two-pass per-arm and overall moments.
  std::vector<double> sum(k, 0.0), ss(k, 0.0);
  double total = 0.0;
  for (std::size_t t = 0; t < trace.rounds(); ++t) {
    sum[trace.arms[t]] += trace.rewards[t];
    total += trace.rewards[t];
  }
  const double overall_mean = total / n;
  std::vector<double> mean(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (trace.pull_counts[i] > 0) mean[i] = sum[i] / static_cast<double>(trace.pull_counts[i]);
  }
  for (std::size_t t = 0; t < trace.rounds(); ++t) {
    const double d = trace.rewards[t] - mean[trace.arms[t]];
    ss[trace.arms[t]] += d * d;
  }
  // sum_i T_i (rho (mu_1 - mu_hat_i) + var_i - sigma_1^2)
  //   = n MV_1 + sum_i T_i (var_i - rho mu_hat_i)
  for (std::size_t i = 0; i < k; ++i) {
    if (trace.pull_counts[i] == 0) continue;
    const double ti = static_cast<double>(trace.pull_counts[i]);
    const double var_i = ss[i] / ti;
    out.r2 += ti * (mean[i] - overall_mean) * (mean[i] - overall_mean);
    out.r1 += ti * (rho * (-mean[i]) + var_i);
  }
  out.r1 += n * mv_best;
  return out;
}

double pseudo_regret(const RunTrace& trace, const GapTable& gaps) {
  check_trace(trace, gaps);
  return pseudo_first_term(trace.pull_counts, gaps) +
         pseudo_cross_term(trace.pull_counts, gaps);
}

double eq10_upper(const RunTrace& trace, const GapTable& gaps) {
  check_trace(trace, gaps);
  return eq10_upper(std::span<const std::uint64_t>(trace.pull_counts), gaps);
}

RegretAccumulator::RegretAccumulator(std::size_t num_arms)
    : per_arm_(num_arms), pulls_(num_arms, 0) {}

void RegretAccumulator::add(std::size_t arm, double reward) {
  overall_.add(reward);
  per_arm_[arm].add(reward);
  ++pulls_[arm];
}

RegretBreakdown RegretAccumulator::breakdown(const GapTable& gaps, double rho) const {
  RegretBreakdown out;
  out.pseudo_first = pseudo_first_term(pulls_, gaps);
  out.pseudo_cross = pseudo_cross_term(pulls_, gaps);
  const double n = static_cast<double>(overall_.count());
  if (overall_.count() == 0) return out;
  const double mv_best = gaps.mv[gaps.best_arm];
  out.realized_regret =
      n * (mv_best - (rho * overall_.mean() - overall_.population_variance()));
  for (std::size_t i = 0; i < per_arm_.size(); ++i) {
    const auto& s = per_arm_[i];
    if (s.count() == 0) continue;
    const double ti = static_cast<double>(s.count());
    const double d = s.mean() - overall_.mean();
    out.r2 += ti * d * d;
    out.r1 += ti * (-rho * s.mean()) + s.m2();
  }
  out.r1 += n * mv_best;
  return out;
}

double RegretAccumulator::eq10_upper(const GapTable& gaps) const {
  return mvbandit::eq10_upper(std::span<const std::uint64_t>(pulls_), gaps);
}

}  // namespace mvbandit
