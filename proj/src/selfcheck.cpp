#include "mvbandit/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "mvbandit/bounds.hpp"
#include "mvbandit/harness.hpp"
#include "mvbandit/oracles.hpp"
#include "mvbandit/posterior.hpp"
#include "mvbandit/random.hpp"
#include "mvbandit/regret.hpp"

namespace mvbandit {

bool SelfcheckReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

void SelfcheckReport::print(std::ostream& os) const {
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(28) << c.name
       << " margin=" << std::setprecision(6) << c.margin << "  " << c.detail << "\n";
  }
  os << (all_passed() ? "selfcheck: all checks passed\n" : "selfcheck: FAILURES\n");
}

BanditInstance gaussian15_instance(double rho) {
  const std::vector<double> mu = {0.1,  0.2,  0.23, 0.27, 0.32, 0.32, 0.34, 0.41,
                                  0.43, 0.54, 0.55, 0.56, 0.67, 0.71, 0.79};
  const std::vector<double> sigma2 = {0.05, 0.34, 0.28, 0.09, 0.23, 0.72, 0.19, 0.14,
                                      0.44, 0.53, 0.24, 0.36, 0.56, 0.49, 0.85};
  std::vector<GaussianArm> arms;
  for (std::size_t i = 0; i < mu.size(); ++i) arms.push_back({mu[i], sigma2[i]});
  return BanditInstance::gaussian(std::move(arms), rho);
}

BanditInstance bernoulli15_instance(double rho) {
  const std::vector<double> p = {0.1,  0.2,  0.23, 0.27, 0.32, 0.32, 0.34, 0.41,
                                 0.43, 0.54, 0.55, 0.56, 0.67, 0.71, 0.79};
  std::vector<BernoulliArm> arms;
  for (double v : p) arms.push_back({v});
  return BanditInstance::bernoulli(std::move(arms), rho);
}

namespace {

std::string fmt(const char* label, double v) {
  std::ostringstream os;
  os << label << "=" << std::setprecision(4) << v;
  return os.str();
}

// Reward vector with a random location, scale and length in [1, max_len].
std::vector<double> random_samples(RandomStream& rng, std::size_t max_len) {
  const auto len = 1 + static_cast<std::size_t>(rng.uniform01() * max_len);
  const double loc = rng.normal(0.0, 5.0);
  const double scale = std::exp(rng.normal(0.0, 1.5));
  std::vector<double> xs(std::min(len, max_len));
  for (auto& x : xs) x = rng.normal(loc, scale);
  return xs;
}

}  // namespace

CheckResult check_posterior_batch(std::uint64_t vectors, std::uint64_t seed) {
  CheckResult res{"posterior_sequential_batch", true, 0.0, ""};
  RandomStream rng(seed, 0);
  double worst = 0.0;
  std::uint64_t mean_mismatch = 0, alpha_mismatch = 0;
  for (std::uint64_t v = 0; v < vectors; ++v) {
    const auto xs = random_samples(rng, 200);
    NormalGammaState state;
    for (double x : xs) state = ng_update(state, x);
    const double t = static_cast<double>(xs.size());
    const double mean = oracle::exact_sum(xs) / t;
    std::vector<double> sq;
    for (double x : xs) sq.push_back((x - mean) * (x - mean));
    const double ss = oracle::exact_sum(sq);
    if (state.mu_hat != mean) ++mean_mismatch;
    if (state.alpha != 0.5 + t / 2.0 || state.count != xs.size()) ++alpha_mismatch;
    const double err = std::abs((2.0 * state.beta - 1.0) - ss);
    const double rel = ss > 0.0 ? err / ss : err;
    worst = std::max(worst, rel);
  }
  res.margin = worst;
  res.passed = mean_mismatch == 0 && alpha_mismatch == 0 && worst <= 1e-9;
  res.detail = fmt("max_rel_err_beta", worst) + " mean_mismatches=" +
               std::to_string(mean_mismatch) + " alpha_mismatches=" +
               std::to_string(alpha_mismatch);
  return res;
}

CheckResult check_beta_binomial_identity() {
  CheckResult res{"beta_binomial_identity", true, 0.0, ""};
  double worst = 0.0;
  for (int a = 1; a <= 10; ++a) {
    for (int b = 1; b <= 10; ++b) {
      for (int k = 1; k <= 9; ++k) {
        const double y = k / 10.0;
        const double lhs = oracle::beta_cdf(a, b, y);
        const double rhs = 1.0 - oracle::binomial_cdf(a + b - 1, y, a - 1);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  res.margin = worst;
  res.passed = worst <= 1e-9;
  res.detail = fmt("max_abs_err", worst);
  return res;
}

CheckResult check_tail_sandwich(const HFunction& h_fn) {
  CheckResult res{"gamma_tail_sandwich", true, 0.0, ""};
  constexpr double tol = 1e-9;
  double min_slack = std::numeric_limits<double>::infinity();
  std::uint64_t violations = 0, points = 0;
  for (int a2 = 4; a2 <= 20; ++a2) {
    const double alpha = a2 / 2.0;
    for (double beta : {0.5, 1.0, 2.0}) {
      for (int j = 1; j <= 20; ++j) {
        const double x = alpha / beta * (1.0 + 0.15 * j);
        const double exact = (a2 % 2 == 0) ? oracle::erlang_ccdf(a2 / 2, beta, x)
                                           : oracle::gamma_ccdf_quadrature(alpha, beta, x);
        const double lower = gamma_tail_lower(alpha, beta, x);
        const double upper = std::exp(-2.0 * alpha * h_fn(beta * x / alpha));
        const double slack = std::min({exact - lower, upper - exact, 1.0 - upper, lower});
        min_slack = std::min(min_slack, slack);
        ++points;
        if (lower > exact + tol || exact > upper + tol || upper > 1.0 || lower < 0.0) {
          ++violations;
        }
      }
    }
  }
  // The lower bound is the Erlang-2 tail itself at alpha = 2.
  double worst_eq = 0.0;
  for (double beta : {0.5, 1.0, 2.0}) {
    for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
      const double exact = oracle::erlang_ccdf(2, beta, x);
      worst_eq = std::max(worst_eq, std::abs(gamma_tail_lower(2.0, beta, x) - exact) / exact);
    }
  }
  res.margin = min_slack;
  res.passed = violations == 0 && worst_eq <= 1e-12;
  res.detail = "points=" + std::to_string(points) + " violations=" +
               std::to_string(violations) + " " + fmt("alpha2_rel_err", worst_eq);
  return res;
}

CheckResult check_h_properties(const HFunction& h_fn) {
  CheckResult res{"h_properties", true, 0.0, ""};
  bool ok = std::abs(h_fn(1.0)) <= 1e-15;
  double min_positive = std::numeric_limits<double>::infinity();
  double min_convexity = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 400; ++i) {
    const double x = 0.025 * i;
    if (std::abs(x - 1.0) > 1e-12) {
      min_positive = std::min(min_positive, h_fn(x));
      if (!(h_fn(x) > 0.0)) ok = false;
    }
    for (int j = i + 1; j <= 400; j += 37) {
      const double y = 0.025 * j;
      const double gap = 0.5 * (h_fn(x) + h_fn(y)) - h_fn(0.5 * (x + y));
      min_convexity = std::min(min_convexity, gap);
      if (gap < -1e-14) ok = false;
    }
  }
  res.passed = ok;
  res.margin = std::min(min_positive, min_convexity);
  res.detail = fmt("min_h_off_1", min_positive) + " " + fmt("min_convexity_gap", min_convexity);
  return res;
}

CheckResult check_regret_identities(std::uint64_t traces, std::uint64_t seed) {
  CheckResult res{"regret_identities", true, 0.0, ""};
  RandomStream rng(seed, 1);
  double worst_decomp = 0.0, worst_split = 0.0, min_eq10_slack = std::numeric_limits<double>::infinity();
  std::uint64_t eq10_violations = 0;
  for (std::uint64_t n = 0; n < traces; ++n) {
    const auto k = 2 + static_cast<std::size_t>(rng.uniform01() * 5);
    std::vector<GaussianArm> arms(k);
    for (auto& a : arms) a = {rng.normal(0.0, 1.0), 0.05 + rng.uniform01()};
    const double rho = std::exp(rng.normal(0.0, 2.0));
    const auto instance = BanditInstance::gaussian(arms, rho);
    const auto gaps = gap_table(instance);
    const auto len = 1 + static_cast<std::size_t>(rng.uniform01() * 50);
    std::vector<std::size_t> pulled(len);
    std::vector<double> rewards(len);
    for (std::size_t t = 0; t < len; ++t) {
      pulled[t] = std::min(k - 1, static_cast<std::size_t>(rng.uniform01() * k));
      rewards[t] = sample_reward(instance, pulled[t], rng);
    }
    const auto trace = RunTrace::from(pulled, rewards, k);

    // Two-pass decomposition computed here, independent of the regret module.
    const double total_n = static_cast<double>(len);
    double mean = 0.0;
    for (double x : rewards) mean += x;
    mean /= total_n;
    double var = 0.0;
    for (double x : rewards) var += (x - mean) * (x - mean);
    var /= total_n;
    std::vector<double> arm_sum(k, 0.0), arm_ss(k, 0.0);
    for (std::size_t t = 0; t < len; ++t) arm_sum[pulled[t]] += rewards[t];
    std::vector<double> arm_mean(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      if (trace.pull_counts[i]) arm_mean[i] = arm_sum[i] / static_cast<double>(trace.pull_counts[i]);
    }
    for (std::size_t t = 0; t < len; ++t) {
      const double d = rewards[t] - arm_mean[pulled[t]];
      arm_ss[pulled[t]] += d * d;
    }
    double within = 0.0, between = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double ti = static_cast<double>(trace.pull_counts[i]);
      within += arm_ss[i];
      between += ti * (arm_mean[i] - mean) * (arm_mean[i] - mean);
    }
    const double decomp = (within + between) / total_n;
    const double scale = std::max({var, within / total_n, between / total_n});
    if (scale > 0.0) worst_decomp = std::max(worst_decomp, std::abs(var - decomp) / scale);

    const auto b = realized_regret(trace, gaps, rho);
    const double split_scale =
        std::max({std::abs(b.r1), std::abs(b.r2), total_n * std::abs(gaps.mv[gaps.best_arm]),
                  total_n * rho * std::abs(mean), total_n * var, 1e-300});
    worst_split = std::max(worst_split, std::abs(b.realized_regret - (b.r1 + b.r2)) / split_scale);

    const double pseudo = pseudo_regret(trace, gaps);
    const double upper = eq10_upper(trace, gaps);
    const double slack = upper - pseudo;
    min_eq10_slack = std::min(min_eq10_slack, slack);
    if (slack < -1e-12 * std::max(1.0, upper)) ++eq10_violations;
  }
  res.passed = worst_decomp <= 1e-9 && worst_split <= 1e-9 && eq10_violations == 0;
  res.margin = std::max(worst_decomp, worst_split);
  res.detail = fmt("max_rel_err_decomposition", worst_decomp) + " " +
               fmt("max_rel_err_r1_r2", worst_split) + " eq10_violations=" +
               std::to_string(eq10_violations);
  return res;
}

CheckResult check_regret_vs_pseudo(const std::string& label, const PolicyKind& kind,
                         const BanditInstance& instance, std::uint64_t horizon,
                         std::uint64_t runs, std::uint64_t seed) {
  CheckResult res{"regret_vs_pseudo_" + label, true, 0.0, ""};
  ExperimentConfig config(instance);
  config.policies = {kind};
  config.horizon = horizon;
  config.runs = runs;
  config.base_seed = seed;
  config.checkpoints = {horizon};
  const auto result = run_experiment(config);
  const auto& c = result.summaries.front().checkpoints.back();
  double sum_var = 0.0;
  for (std::size_t i = 0; i < instance.size(); ++i) sum_var += instance.variance(i);
  const double pooled = std::hypot(c.stderr_regret, c.stderr_pseudo_regret);
  const double rhs = c.mean_pseudo_regret + 3.0 * sum_var + 3.0 * pooled;
  res.margin = rhs - c.mean_regret;
  res.passed = c.mean_regret <= rhs;
  res.detail = fmt("mean_regret", c.mean_regret) + " " + fmt("bound", rhs);
  return res;
}

SelfcheckReport selfcheck(const SelfcheckOptions& options) {
  const HFunction h_fn = options.h_override ? options.h_override
                                            : HFunction([](double x) { return h(x); });
  const bool quick = options.quick;
  SelfcheckReport report;
  report.checks.push_back(check_posterior_batch(quick ? 200 : 1000, 11));
  report.checks.push_back(check_beta_binomial_identity());
  report.checks.push_back(check_tail_sandwich(h_fn));
  report.checks.push_back(check_h_properties(h_fn));
  report.checks.push_back(check_regret_identities(quick ? 2000 : 10000, 12));

  const std::uint64_t horizon = quick ? 300 : 3000;
  const std::uint64_t runs = 500;
  PolicyKind mvts{.tag = PolicyTag::mvts};
  PolicyKind bmvts{.tag = PolicyTag::bmvts};
  const auto two_arm = BanditInstance::gaussian({{0.5, 0.1}, {0.4, 0.3}}, 0.01);
  report.checks.push_back(check_regret_vs_pseudo("gaussian15_rho1", mvts, gaussian15_instance(1.0),
                                       horizon, runs, 13));
  report.checks.push_back(check_regret_vs_pseudo("gaussian2_rho0.01", mvts, two_arm, horizon, runs, 14));
  report.checks.push_back(check_regret_vs_pseudo("bernoulli15_rho0.444", bmvts,
                                       bernoulli15_instance(0.444), horizon, runs, 15));
  return report;
}

}  // namespace mvbandit
