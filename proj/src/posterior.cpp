#include "mvbandit/posterior.hpp"

#include <cmath>
#include <stdexcept>

namespace mvbandit {

double NormalGammaState::empirical_variance() const {
  if (count == 0) throw std::logic_error("empirical variance of an unpulled arm");
  return (2.0 * beta - 1.0) / static_cast<double>(count);
}

NormalGammaState NormalGammaState::from_parameters(double mu_hat,
                                                   std::uint64_t count,
                                                   double alpha, double beta) {
  NormalGammaState s;
  s.mu_hat = mu_hat;
  s.count = count;
  s.alpha = alpha;
  s.beta = beta;
  const double n = static_cast<double>(count);
  s.sum_hi = mu_hat * n;
  s.sum_lo = std::fma(mu_hat, n, -s.sum_hi);
  return s;
}

NormalGammaState ng_update(const NormalGammaState& state, double x) {
  const double t = static_cast<double>(state.count);
  const double deviation = x - state.mu_hat;
  NormalGammaState next;
  // (t * mu_hat + x) / (t + 1), with t * mu_hat held exactly as the running sum.
  const double s = state.sum_hi + x;
  const double bv = s - state.sum_hi;
  const double err = (state.sum_hi - (s - bv)) + (x - bv);
  const double lo = state.sum_lo + err;
  next.sum_hi = s + lo;
  next.sum_lo = lo - (next.sum_hi - s);
  next.mu_hat = next.sum_hi / (t + 1.0);
  next.count = state.count + 1;
  next.alpha = state.alpha + 0.5;
  next.beta = state.beta + (t / (t + 1.0)) * deviation * deviation / 2.0;
  return next;
}

double ng_sample_mean(const NormalGammaState& state, RandomStream& rng) {
  if (state.count == 0) {
    throw std::logic_error("ng_sample_mean: posterior mean undefined before the first pull");
  }
  return rng.normal(state.mu_hat, 1.0 / std::sqrt(static_cast<double>(state.count)));
}

double ng_sample_precision(const NormalGammaState& state, RandomStream& rng) {
  if (!(state.alpha > 0.0) || !(state.beta > 0.0)) {
    throw std::logic_error("ng_sample_precision: nonpositive Gamma parameters");
  }
  return rng.gamma(state.alpha, state.beta);
}

double BetaState::empirical_mean() const {
  const double n = pulls();
  return n > 0.0 ? (alpha - 1.0) / n : 0.0;
}

BetaState beta_update(const BetaState& state, double x) {
  if (x != 0.0 && x != 1.0) {
    throw std::domain_error("beta_update: reward must be 0 or 1");
  }
  return {state.alpha + x, state.beta + (1.0 - x)};
}

double beta_sample(const BetaState& state, RandomStream& rng) {
  if (!(state.alpha > 0.0) || !(state.beta > 0.0)) {
    throw std::logic_error("beta_sample: nonpositive Beta parameters");
  }
  return rng.beta(state.alpha, state.beta);
}

nlohmann::json to_json(const NormalGammaState& state) {
  return {{"mu_hat", state.mu_hat},
          {"count", state.count},
          {"alpha", state.alpha},
          {"beta", state.beta}};
}

nlohmann::json to_json(const BetaState& state) {
  return {{"alpha", state.alpha}, {"beta", state.beta}};
}

}  // namespace mvbandit
