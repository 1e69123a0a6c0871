#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvbandit/env.hpp"
#include "mvbandit/posterior.hpp"
#include "mvbandit/random.hpp"

namespace mvbandit {

enum class PolicyTag { mts, vts, mvts, bmvts, mv_lcb_gaussian, mv_lcb_bernoulli };

/// Variance term used by MTS: the plug-in empirical variance (2*beta - 1)/T,
/// or the literal 2*beta.
enum class VarianceEstimator { empirical, two_beta };

struct PolicyKind {
  PolicyTag tag = PolicyTag::mvts;
  VarianceEstimator mts_variance_estimator = VarianceEstimator::empirical;
  double lcb_width_scale = 1.0;

  Family family() const;
  bool is_thompson() const;
  /// Short label used in CSV output, e.g. "mvts", "mv_lcb".
  std::string label() const;
};

std::string_view to_string(PolicyTag tag);
std::string_view to_string(VarianceEstimator estimator);

/// Parses a policy block {"policy": ..., "mts_variance_estimator": ...,
/// "lcb_width_scale": ...}. "mv_lcb" resolves to the LCB baseline of `family`.
PolicyKind policy_from_json(const nlohmann::json& j, Family family);
nlohmann::json policy_to_json(const PolicyKind& kind);
/// Accepts the tags of policy_from_json plus the explicit
/// "mv_lcb_gaussian"/"mv_lcb_bernoulli".
PolicyKind parse_policy_tag(std::string_view tag, Family family);

/// Thompson samples of one round. Unused vectors stay empty.
struct ThompsonDraws {
  std::vector<double> theta;
  std::vector<double> tau;
};

/// Everything a policy run owns: per-arm posteriors, pull counts, and the
/// index of the next round (1-based).
struct PolicyState {
  std::vector<NormalGammaState> normal_gamma;
  std::vector<BetaState> beta;
  std::vector<std::uint64_t> pulls;
  std::uint64_t round = 1;
  ThompsonDraws scratch;

  std::size_t arms() const { return pulls.size(); }
};

/// Fresh state with the fixed priors. Throws ConfigError on family mismatch.
PolicyState make_policy_state(const PolicyKind& kind, const BanditInstance& instance);

/// Draws the Thompson samples of one round: exactly one draw per arm per
/// sampler the policy uses. LCB policies draw nothing.
void draw_thompson(const PolicyKind& kind, const PolicyState& state,
                   RandomStream& rng, ThompsonDraws& out);

/// Per-arm index under the given draws.
std::vector<double> policy_indices(const PolicyKind& kind, const PolicyState& state,
                                   const ThompsonDraws& draws, double rho);

/// Argmax of the per-arm index; ties go to the lowest index.
std::size_t select_from_draws(const PolicyKind& kind, const PolicyState& state,
                              const ThompsonDraws& draws, double rho);

std::size_t select_arm(const PolicyKind& kind, PolicyState& state, double rho,
                       RandomStream& rng);

struct StepResult {
  std::size_t arm;
  double reward;
};

/// Plays one round: the round-robin initialization for Gaussian Thompson
/// policies, select_arm otherwise; then samples the reward and updates the
/// posterior of the played arm.
StepResult step(const PolicyKind& kind, PolicyState& state,
                const BanditInstance& instance, RandomStream& rng_policy,
                RandomStream& rng_env);

nlohmann::json posteriors_to_json(const PolicyState& state);

}  // namespace mvbandit
