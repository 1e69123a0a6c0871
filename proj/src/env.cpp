#include "mvbandit/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace mvbandit {

std::string_view to_string(Family family) {
  return family == Family::gaussian ? "gaussian" : "bernoulli";
}

double mean_variance(double mu, double sigma2, double rho) {
  return rho * mu - sigma2;
}

namespace {

void check_rho(double rho) {
  if (!std::isfinite(rho) || rho < 0.0) {
    throw ConfigError("rho must be a finite nonnegative number");
  }
}

}  // namespace

BanditInstance BanditInstance::gaussian(std::vector<GaussianArm> arms,
                                        double rho) {
  if (arms.size() < 2) throw ConfigError("an instance needs at least 2 arms");
  check_rho(rho);
  for (const auto& arm : arms) {
    if (!std::isfinite(arm.mu)) throw ConfigError("gaussian arm mean must be finite");
    if (!(arm.sigma2 > 0.0) || !std::isfinite(arm.sigma2)) {
      throw ConfigError("gaussian arm variance must be positive and finite");
    }
  }
  return BanditInstance(std::move(arms), rho);
}

BanditInstance BanditInstance::bernoulli(std::vector<BernoulliArm> arms,
                                         double rho) {
  if (arms.size() < 2) throw ConfigError("an instance needs at least 2 arms");
  check_rho(rho);
  for (const auto& arm : arms) {
    if (!(arm.p >= 0.0 && arm.p <= 1.0)) {
      throw ConfigError("bernoulli arm probability must lie in [0, 1]");
    }
  }
  return BanditInstance(std::move(arms), rho);
}

Family BanditInstance::family() const {
  return std::holds_alternative<std::vector<GaussianArm>>(arms_)
             ? Family::gaussian
             : Family::bernoulli;
}

std::size_t BanditInstance::size() const {
  return std::visit([](const auto& v) { return v.size(); }, arms_);
}

double BanditInstance::mean(std::size_t arm) const {
  if (arm >= size()) throw std::out_of_range("arm index out of range");
  if (family() == Family::gaussian) return gaussian_arms()[arm].mu;
  return bernoulli_arms()[arm].p;
}

double BanditInstance::variance(std::size_t arm) const {
  if (arm >= size()) throw std::out_of_range("arm index out of range");
  if (family() == Family::gaussian) return gaussian_arms()[arm].sigma2;
  const double p = bernoulli_arms()[arm].p;
  return p * (1.0 - p);
}

BanditInstance BanditInstance::with_rho(double rho) const {
  check_rho(rho);
  return BanditInstance(arms_, rho);
}

const std::vector<GaussianArm>& BanditInstance::gaussian_arms() const {
  if (family() != Family::gaussian) throw ConfigError("instance is not gaussian");
  return std::get<std::vector<GaussianArm>>(arms_);
}

const std::vector<BernoulliArm>& BanditInstance::bernoulli_arms() const {
  if (family() != Family::bernoulli) throw ConfigError("instance is not bernoulli");
  return std::get<std::vector<BernoulliArm>>(arms_);
}

std::vector<std::size_t> BanditInstance::arms_with_variance_above_one() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (variance(i) > 1.0) out.push_back(i);
  }
  return out;
}

GapTable gap_table(const BanditInstance& instance) {
  const std::size_t k = instance.size();
  GapTable table;
  table.mv.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    table.mv[i] =
        mean_variance(instance.mean(i), instance.variance(i), instance.rho());
    if (table.mv[i] > table.mv[table.best_arm]) table.best_arm = i;
  }
  table.delta.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    table.delta[i] = table.mv[table.best_arm] - table.mv[i];
  }
  table.gamma.assign(k, std::vector<double>(k, 0.0));
  table.gamma_max2.assign(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double g = instance.mean(i) - instance.mean(j);
      table.gamma[i][j] = g;
      table.gamma_max2[i] = std::max(table.gamma_max2[i], g * g);
    }
  }
  return table;
}

double sample_reward(const BanditInstance& instance, std::size_t arm,
                     RandomStream& rng) {
  if (arm >= instance.size()) throw std::out_of_range("arm index out of range");
  if (instance.family() == Family::gaussian) {
    const auto& a = instance.gaussian_arms()[arm];
    return rng.normal(a.mu, std::sqrt(a.sigma2));
  }
  return rng.bernoulli(instance.bernoulli_arms()[arm].p) ? 1.0 : 0.0;
}

namespace {

std::vector<double> read_reals(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw ConfigError(std::string("instance: missing required key '") + key + "'");
  }
  const auto& arr = j.at(key);
  if (!arr.is_array()) {
    throw ConfigError(std::string("instance: '") + key + "' must be an array");
  }
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) {
      throw ConfigError(std::string("instance: '") + key + "' must hold numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

BanditInstance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("instance: expected a JSON object");
  static const std::set<std::string> known = {"family", "mu", "sigma2", "p", "rho"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError("instance: unknown key '" + key + "'");
  }
  if (!j.contains("family") || !j.at("family").is_string()) {
    throw ConfigError("instance: 'family' must be \"gaussian\" or \"bernoulli\"");
  }
  double rho = 1.0;
  if (j.contains("rho")) {
    if (!j.at("rho").is_number()) throw ConfigError("instance: 'rho' must be a number");
    rho = j.at("rho").get<double>();
  }
  const auto family = j.at("family").get<std::string>();
  if (family == "gaussian") {
    if (j.contains("p")) throw ConfigError("instance: 'p' is not valid for gaussian");
    const auto mu = read_reals(j, "mu");
    const auto sigma2 = read_reals(j, "sigma2");
    if (mu.size() != sigma2.size()) {
      throw ConfigError("instance: 'mu' and 'sigma2' lengths differ");
    }
    std::vector<GaussianArm> arms;
    for (std::size_t i = 0; i < mu.size(); ++i) arms.push_back({mu[i], sigma2[i]});
    return BanditInstance::gaussian(std::move(arms), rho);
  }
  if (family == "bernoulli") {
    if (j.contains("mu") || j.contains("sigma2")) {
      throw ConfigError("instance: 'mu'/'sigma2' are not valid for bernoulli");
    }
    std::vector<BernoulliArm> arms;
    for (double p : read_reals(j, "p")) arms.push_back({p});
    return BanditInstance::bernoulli(std::move(arms), rho);
  }
  throw ConfigError("instance: unknown family '" + family + "'");
}

nlohmann::json instance_to_json(const BanditInstance& instance) {
  nlohmann::json j;
  j["family"] = std::string(to_string(instance.family()));
  if (instance.family() == Family::gaussian) {
    std::vector<double> mu, sigma2;
    for (const auto& a : instance.gaussian_arms()) {
      mu.push_back(a.mu);
      sigma2.push_back(a.sigma2);
    }
    j["mu"] = mu;
    j["sigma2"] = sigma2;
  } else {
    std::vector<double> p;
    for (const auto& a : instance.bernoulli_arms()) p.push_back(a.p);
    j["p"] = p;
  }
  j["rho"] = instance.rho();
  return j;
}

BanditInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open instance file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

}  // namespace mvbandit
