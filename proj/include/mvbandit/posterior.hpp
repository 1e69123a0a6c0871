#pragma once

#include <cstdint>

#include <nlohmann/json.hpp>

#include "mvbandit/random.hpp"

namespace mvbandit {

/// Normal-Gamma posterior over (mean, precision) of a Gaussian arm, starting
/// from the improper prior (0, 0, 1/2, 1/2).
///
/// With that prior, after t observations:
///   mu_hat = sample mean, alpha = 1/2 + t/2, and 2*beta - 1 equals the sum of
///   squared deviations about mu_hat.
///
/// The location mu_hat is kept as (running sum) / count, with the running sum
/// carried as an unevaluated pair (sum_hi + sum_lo). sum_hi is then the
/// rounded exact sum, independent of observation order, so mu_hat does not
/// drift with the number of updates.
struct NormalGammaState {
  double mu_hat = 0.0;
  std::uint64_t count = 0;
  double alpha = 0.5;
  double beta = 0.5;
  double sum_hi = 0.0;
  double sum_lo = 0.0;

  /// A state with the given posterior parameters, as if count observations
  /// summing to mu_hat * count had been seen.
  static NormalGammaState from_parameters(double mu_hat, std::uint64_t count,
                                          double alpha, double beta);

  /// Population-form empirical variance (2*beta - 1) / count.
  double empirical_variance() const;
};

NormalGammaState ng_update(const NormalGammaState& state, double x);

/// Draw from N(mu_hat, 1/count). Requires count >= 1.
double ng_sample_mean(const NormalGammaState& state, RandomStream& rng);

/// Draw from Gamma(alpha, beta) with beta a rate.
double ng_sample_precision(const NormalGammaState& state, RandomStream& rng);

/// Beta posterior of a Bernoulli arm from the uniform prior Beta(1, 1).
struct BetaState {
  double alpha = 1.0;
  double beta = 1.0;

  double pulls() const { return alpha + beta - 2.0; }
  /// Fraction of successes among pulls; 0 when never pulled.
  double empirical_mean() const;
};

/// x must be exactly 0 or 1.
BetaState beta_update(const BetaState& state, double x);

double beta_sample(const BetaState& state, RandomStream& rng);

nlohmann::json to_json(const NormalGammaState& state);
nlohmann::json to_json(const BetaState& state);

}  // namespace mvbandit
