#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvbandit/random.hpp"

namespace mvbandit {

/// Raised for malformed configuration: schema violations, family mismatches,
/// out-of-range settings. Always reported before any simulation starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Family { gaussian, bernoulli };

std::string_view to_string(Family family);

struct GaussianArm {
  double mu;
  double sigma2;
};

struct BernoulliArm {
  double p;
};

/// Mean-variance of an arm: rho * mu - sigma2.
double mean_variance(double mu, double sigma2, double rho);

/// A homogeneous family of at least two arms plus the risk tolerance rho.
/// Immutable once built.
class BanditInstance {
 public:
  static BanditInstance gaussian(std::vector<GaussianArm> arms, double rho);
  static BanditInstance bernoulli(std::vector<BernoulliArm> arms, double rho);

  Family family() const;
  std::size_t size() const;
  double rho() const { return rho_; }

  double mean(std::size_t arm) const;
  /// For Bernoulli arms this is p(1-p), derived on demand.
  double variance(std::size_t arm) const;

  BanditInstance with_rho(double rho) const;

  const std::vector<GaussianArm>& gaussian_arms() const;
  const std::vector<BernoulliArm>& bernoulli_arms() const;

  /// Arms exceeding the unit-variance class the regret bounds assume.
  std::vector<std::size_t> arms_with_variance_above_one() const;

 private:
  using Arms = std::variant<std::vector<GaussianArm>, std::vector<BernoulliArm>>;
  BanditInstance(Arms arms, double rho) : arms_(std::move(arms)), rho_(rho) {}

  Arms arms_;
  double rho_;
};

/// Ground-truth mean-variance quantities of an instance. "best" is the
/// MV-argmax with ties going to the lowest index.
struct GapTable {
  std::vector<double> mv;
  std::size_t best_arm = 0;
  std::vector<double> delta;
  /// gamma[i][j] = mu_i - mu_j
  std::vector<std::vector<double>> gamma;
  /// max_j (mu_i - mu_j)^2
  std::vector<double> gamma_max2;

  std::size_t size() const { return mv.size(); }
};

GapTable gap_table(const BanditInstance& instance);

/// One reward from the given arm; consumes exactly one logical draw.
double sample_reward(const BanditInstance& instance, std::size_t arm,
                     RandomStream& rng);

/// {"family": "gaussian"|"bernoulli", "mu": [...], "sigma2": [...], "p": [...],
///  "rho": r}. Unknown keys are rejected.
BanditInstance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const BanditInstance& instance);
BanditInstance load_instance(const std::filesystem::path& path);

}  // namespace mvbandit
