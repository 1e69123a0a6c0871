#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "mvbandit/env.hpp"
#include "mvbandit/policies.hpp"

namespace mvbandit {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Worst observed slack (positive when passing) or worst error, see detail.
  double margin = 0.0;
  std::string detail;
};

struct SelfcheckReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  void print(std::ostream& os) const;
};

using HFunction = std::function<double(double)>;

/// Sequential Normal-Gamma updates against an exact batch computation:
/// mu_hat and alpha bit-exact, 2 beta - 1 vs the sum of squared deviations
/// within 1e-9 relative error.
CheckResult check_posterior_batch(std::uint64_t vectors, std::uint64_t seed);

/// Beta CDF equals 1 - Binomial CDF for integer parameters in [1, 10] on the
/// grid y = 0.1..0.9, within 1e-9.
CheckResult check_beta_binomial_identity();

/// lower <= P(X >= x) <= upper <= 1 over alpha in {2, 2.5, ..., 10},
/// beta in {0.5, 1, 2} and 20 points above the mean (oracle tolerance 1e-9),
/// plus equality of the lower bound with the Erlang-2 tail at alpha = 2.
/// `h_fn` replaces h inside the upper bound (negative controls).
CheckResult check_tail_sandwich(const HFunction& h_fn);

/// h(1) = 0, h > 0 elsewhere, midpoint convexity.
CheckResult check_h_properties(const HFunction& h_fn);

/// Random small traces: variance decomposition within 1e-9, realized = r1 + r2,
/// pseudo-regret <= eq10 upper bound.
CheckResult check_regret_identities(std::uint64_t traces, std::uint64_t seed);

/// mean(realized) <= mean(pseudo) + 3 sum sigma_i^2 + 3 pooled standard errors
/// over `runs` seeded runs of `kind` on `instance`.
CheckResult check_regret_vs_pseudo(const std::string& label, const PolicyKind& kind,
                         const BanditInstance& instance, std::uint64_t horizon,
                         std::uint64_t runs, std::uint64_t seed);

/// The 15-arm instances shipped in data/.
BanditInstance gaussian15_instance(double rho);
BanditInstance bernoulli15_instance(double rho);

struct SelfcheckOptions {
  bool quick = false;
  /// Replaces h in the tail and h checks; empty means the library h.
  HFunction h_override;
};

SelfcheckReport selfcheck(const SelfcheckOptions& options = {});

}  // namespace mvbandit
