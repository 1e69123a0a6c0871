#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvbandit/env.hpp"
#include "mvbandit/policies.hpp"

namespace mvbandit {

/// h(x) = (x - 1 - ln x) / 2 for x > 0; throws std::domain_error otherwise.
double h(double x);

/// Lower bound on P(X >= x) for X ~ Gamma(alpha, rate beta):
///   exp(-beta x) (1 + beta x)^(alpha - 1) / Gamma(alpha).
/// Valid for alpha >= 2 and x > 0; exact at alpha = 2.
double gamma_tail_lower(double alpha, double beta, double x);

/// Upper bound on P(X >= x), exp(-2 alpha h(beta x / alpha)), valid above the
/// mean (x > alpha / beta) for alpha >= 2.
double gamma_tail_upper(double alpha, double beta, double x);

/// Asymptotic log(n) slope of the pseudo-regret bound for one policy on one
/// instance. Arm indices are the user's; the bound's "arm 1" is
/// `best_arm`, the MV-argmax.
struct BoundReport {
  PolicyTag policy;
  std::size_t best_arm = 0;
  /// Zero for the best arm; +inf where the bound is vacuous.
  std::vector<double> per_arm;
  double total = 0.0;
  /// Per-arm hypothesis check of the underlying bound (true for the best arm).
  std::vector<bool> assumptions_ok;
  std::vector<std::string> notes;
  /// Gaussian policies only: limiting slopes as rho -> inf (per unit rho)
  /// and as rho -> 0.
  std::optional<double> limit_rho_inf;
  std::optional<double> limit_rho_0;
};

BoundReport asymptotic_regret_coefficient(const PolicyKind& kind,
                                          const BanditInstance& instance);

nlohmann::json to_json(const BoundReport& report);

}  // namespace mvbandit
