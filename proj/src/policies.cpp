#include "mvbandit/policies.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace mvbandit {

Family PolicyKind::family() const {
  switch (tag) {
    case PolicyTag::bmvts:
    case PolicyTag::mv_lcb_bernoulli:
      return Family::bernoulli;
    default:
      return Family::gaussian;
  }
}

bool PolicyKind::is_thompson() const {
  return tag != PolicyTag::mv_lcb_gaussian && tag != PolicyTag::mv_lcb_bernoulli;
}

std::string PolicyKind::label() const {
  if (!is_thompson()) return "mv_lcb";
  std::string out(to_string(tag));
  if (tag == PolicyTag::mts && mts_variance_estimator == VarianceEstimator::two_beta) {
    out += "_two_beta";
  }
  return out;
}

std::string_view to_string(PolicyTag tag) {
  switch (tag) {
    case PolicyTag::mts: return "mts";
    case PolicyTag::vts: return "vts";
    case PolicyTag::mvts: return "mvts";
    case PolicyTag::bmvts: return "bmvts";
    case PolicyTag::mv_lcb_gaussian: return "mv_lcb_gaussian";
    case PolicyTag::mv_lcb_bernoulli: return "mv_lcb_bernoulli";
  }
  return "?";
}

std::string_view to_string(VarianceEstimator estimator) {
  return estimator == VarianceEstimator::empirical ? "empirical" : "two_beta";
}

PolicyKind parse_policy_tag(std::string_view tag, Family family) {
  PolicyKind kind;
  if (tag == "mts") kind.tag = PolicyTag::mts;
  else if (tag == "vts") kind.tag = PolicyTag::vts;
  else if (tag == "mvts") kind.tag = PolicyTag::mvts;
  else if (tag == "bmvts") kind.tag = PolicyTag::bmvts;
  else if (tag == "mv_lcb") {
    kind.tag = family == Family::gaussian ? PolicyTag::mv_lcb_gaussian
                                          : PolicyTag::mv_lcb_bernoulli;
  } else if (tag == "mv_lcb_gaussian") kind.tag = PolicyTag::mv_lcb_gaussian;
  else if (tag == "mv_lcb_bernoulli") kind.tag = PolicyTag::mv_lcb_bernoulli;
  else throw ConfigError("unknown policy '" + std::string(tag) + "'");
  return kind;
}

PolicyKind policy_from_json(const nlohmann::json& j, Family family) {
  if (j.is_string()) return parse_policy_tag(j.get<std::string>(), family);
  if (!j.is_object()) throw ConfigError("policy: expected an object or a tag string");
  static const std::set<std::string> known = {"policy", "mts_variance_estimator",
                                              "lcb_width_scale"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError("policy: unknown key '" + key + "'");
  }
  if (!j.contains("policy") || !j.at("policy").is_string()) {
    throw ConfigError("policy: missing 'policy' tag");
  }
  PolicyKind kind = parse_policy_tag(j.at("policy").get<std::string>(), family);
  if (j.contains("mts_variance_estimator")) {
    const auto& v = j.at("mts_variance_estimator");
    const std::string s = v.is_string() ? v.get<std::string>() : "";
    if (s == "empirical") kind.mts_variance_estimator = VarianceEstimator::empirical;
    else if (s == "two_beta") kind.mts_variance_estimator = VarianceEstimator::two_beta;
    else throw ConfigError("policy: mts_variance_estimator must be empirical|two_beta");
  }
  if (j.contains("lcb_width_scale")) {
    const auto& v = j.at("lcb_width_scale");
    if (!v.is_number() || !(v.get<double>() > 0.0)) {
      throw ConfigError("policy: lcb_width_scale must be a positive number");
    }
    kind.lcb_width_scale = v.get<double>();
  }
  return kind;
}

nlohmann::json policy_to_json(const PolicyKind& kind) {
  return {{"policy", std::string(to_string(kind.tag))},
          {"mts_variance_estimator", std::string(to_string(kind.mts_variance_estimator))},
          {"lcb_width_scale", kind.lcb_width_scale}};
}

PolicyState make_policy_state(const PolicyKind& kind, const BanditInstance& instance) {
  if (kind.family() != instance.family()) {
    throw ConfigError("policy " + std::string(to_string(kind.tag)) +
                      " cannot run on a " + std::string(to_string(instance.family())) +
                      " instance");
  }
  PolicyState state;
  const std::size_t k = instance.size();
  state.pulls.assign(k, 0);
  if (kind.family() == Family::gaussian) {
    state.normal_gamma.assign(k, NormalGammaState{});
  } else {
    state.beta.assign(k, BetaState{});
  }
  return state;
}

void draw_thompson(const PolicyKind& kind, const PolicyState& state,
                   RandomStream& rng, ThompsonDraws& out) {
  const std::size_t k = state.arms();
  const bool wants_theta = kind.tag == PolicyTag::mts || kind.tag == PolicyTag::mvts ||
                           kind.tag == PolicyTag::bmvts;
  const bool wants_tau = kind.tag == PolicyTag::vts || kind.tag == PolicyTag::mvts;
  out.theta.resize(wants_theta ? k : 0);
  out.tau.resize(wants_tau ? k : 0);
  if (kind.tag == PolicyTag::bmvts) {
    for (std::size_t i = 0; i < k; ++i) out.theta[i] = beta_sample(state.beta[i], rng);
    return;
  }
  // Means first, then precisions: the order is part of the replay contract.
  if (wants_theta) {
    for (std::size_t i = 0; i < k; ++i) {
      out.theta[i] = ng_sample_mean(state.normal_gamma[i], rng);
    }
  }
  if (wants_tau) {
    for (std::size_t i = 0; i < k; ++i) {
      out.tau[i] = ng_sample_precision(state.normal_gamma[i], rng);
    }
  }
}

namespace {

double lcb_index(const PolicyKind& kind, const PolicyState& state, std::size_t i,
                 double rho) {
  const std::uint64_t pulls = state.pulls[i];
  if (pulls == 0) return std::numeric_limits<double>::infinity();
  double mean, variance;
  if (kind.tag == PolicyTag::mv_lcb_gaussian) {
    mean = state.normal_gamma[i].mu_hat;
    variance = state.normal_gamma[i].empirical_variance();
  } else {
    mean = state.beta[i].empirical_mean();
    variance = mean * (1.0 - mean);
  }
  const double t = static_cast<double>(state.round);
  const double width = kind.lcb_width_scale * (5.0 + rho) *
                       std::sqrt(std::log(t * t) / (2.0 * static_cast<double>(pulls)));
  return rho * mean - variance + width;
}

inline double arm_index(const PolicyKind& kind, const PolicyState& state,
                        const ThompsonDraws& draws, double rho, std::size_t i) {
  switch (kind.tag) {
    case PolicyTag::mts: {
      const auto& ng = state.normal_gamma[i];
      const double v = kind.mts_variance_estimator == VarianceEstimator::empirical
                           ? ng.empirical_variance()
                           : 2.0 * ng.beta;
      return rho * draws.theta[i] - v;
    }
    case PolicyTag::vts:
      return rho * state.normal_gamma[i].mu_hat - 1.0 / draws.tau[i];
    case PolicyTag::mvts:
      return rho * draws.theta[i] - 1.0 / draws.tau[i];
    case PolicyTag::bmvts: {
      const double theta = draws.theta[i];
      return rho * theta - theta * (1.0 - theta);
    }
    case PolicyTag::mv_lcb_gaussian:
    case PolicyTag::mv_lcb_bernoulli:
      return lcb_index(kind, state, i, rho);
  }
  return 0.0;
}

}  // namespace

std::vector<double> policy_indices(const PolicyKind& kind, const PolicyState& state,
                                   const ThompsonDraws& draws, double rho) {
  std::vector<double> out(state.arms());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = arm_index(kind, state, draws, rho, i);
  }
  return out;
}

std::size_t select_from_draws(const PolicyKind& kind, const PolicyState& state,
                              const ThompsonDraws& draws, double rho) {
  std::size_t best = 0;
  double best_index = arm_index(kind, state, draws, rho, 0);
  for (std::size_t i = 1; i < state.arms(); ++i) {
    const double index = arm_index(kind, state, draws, rho, i);
    if (index > best_index) {
      best_index = index;
      best = i;
    }
  }
  return best;
}

std::size_t select_arm(const PolicyKind& kind, PolicyState& state, double rho,
                       RandomStream& rng) {
  if (kind.is_thompson()) draw_thompson(kind, state, rng, state.scratch);
  return select_from_draws(kind, state, state.scratch, rho);
}

StepResult step(const PolicyKind& kind, PolicyState& state,
                const BanditInstance& instance, RandomStream& rng_policy,
                RandomStream& rng_env) {
  if (kind.family() != instance.family() || state.arms() != instance.size()) {
    throw ConfigError("policy state does not match the instance");
  }
  const std::size_t k = state.arms();
  std::size_t arm;
  const bool initializing = kind.family() == Family::gaussian && kind.is_thompson() &&
                            state.round <= k;
  if (initializing) {
    arm = static_cast<std::size_t>(state.round - 1);
  } else {
    arm = select_arm(kind, state, instance.rho(), rng_policy);
  }
  const double reward = sample_reward(instance, arm, rng_env);
  if (kind.family() == Family::gaussian) {
    state.normal_gamma[arm] = ng_update(state.normal_gamma[arm], reward);
  } else {
    state.beta[arm] = beta_update(state.beta[arm], reward);
  }
  ++state.pulls[arm];
  ++state.round;
  return {arm, reward};
}

nlohmann::json posteriors_to_json(const PolicyState& state) {
  nlohmann::json arms = nlohmann::json::array();
  for (std::size_t i = 0; i < state.arms(); ++i) {
    nlohmann::json a = state.normal_gamma.empty() ? to_json(state.beta[i])
                                                  : to_json(state.normal_gamma[i]);
    a["pulls"] = state.pulls[i];
    arms.push_back(std::move(a));
  }
  return arms;
}

}  // namespace mvbandit
