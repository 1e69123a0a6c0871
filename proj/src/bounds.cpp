#include "mvbandit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mvbandit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// 1/x with x == 0 mapped to +inf.
double reciprocal(double x) { return x == 0.0 ? kInf : 1.0 / x; }

void check_tail_args(double alpha, double beta) {
  if (!(alpha >= 2.0)) {
    throw std::domain_error("gamma tail bound requires shape alpha >= 2");
  }
  if (!(beta > 0.0)) throw std::domain_error("gamma tail bound requires rate beta > 0");
}
}  // namespace

double h(double x) {
  if (!(x > 0.0)) throw std::domain_error("h(x) requires x > 0");
  // log1p keeps precision near x = 1, where x - 1 - ln x cancels.
  const double d = x - 1.0;
  return 0.5 * (d - std::log1p(d));
}

double gamma_tail_lower(double alpha, double beta, double x) {
  check_tail_args(alpha, beta);
  if (!(x > 0.0)) throw std::domain_error("gamma_tail_lower requires x > 0");
  const double bx = beta * x;
  return std::exp(-bx + (alpha - 1.0) * std::log1p(bx) - std::lgamma(alpha));
}

double gamma_tail_upper(double alpha, double beta, double x) {
  check_tail_args(alpha, beta);
  if (!(x > alpha / beta)) {
    throw std::domain_error("gamma_tail_upper is valid only for x > alpha / beta");
  }
  return std::exp(-2.0 * alpha * h(beta * x / alpha));
}

BoundReport asymptotic_regret_coefficient(const PolicyKind& kind,
                                          const BanditInstance& instance) {
  if (!kind.is_thompson()) {
    throw ConfigError("no asymptotic regret bound is defined for the LCB baselines");
  }
  if (kind.family() != instance.family()) {
    throw ConfigError("policy " + std::string(to_string(kind.tag)) +
                      " does not match a " + std::string(to_string(instance.family())) +
                      " instance");
  }
  const GapTable gaps = gap_table(instance);
  const std::size_t k = instance.size();
  const std::size_t best = gaps.best_arm;
  const double rho = instance.rho();
  const double mu1 = instance.mean(best);
  const double s1 = instance.variance(best);

  BoundReport report;
  report.policy = kind.tag;
  report.best_arm = best;
  report.per_arm.assign(k, 0.0);
  report.assumptions_ok.assign(k, true);

  auto flag = [&](std::size_t i, const std::string& what) {
    report.notes.push_back("arm " + std::to_string(i) + ": " + what);
  };

  // Global VTS hypothesis: rho <= min{Delta_i / Gamma_i : Delta_i / Gamma_i > 0}.
  bool vts_rho_ok = true;
  if (kind.tag == PolicyTag::vts) {
    double min_ratio = kInf;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == best) continue;
      const double g = mu1 - instance.mean(i);
      if (g == 0.0) continue;
      const double ratio = gaps.delta[i] / g;
      if (ratio > 0.0) min_ratio = std::min(min_ratio, ratio);
    }
    vts_rho_ok = rho <= min_ratio;
    if (!vts_rho_ok) report.notes.push_back("rho exceeds min Delta_i / Gamma_i");
  }

  for (std::size_t i = 0; i < k; ++i) {
    if (i == best) continue;
    const double weight = gaps.delta[i] + 2.0 * gaps.gamma_max2[i];
    const double g = mu1 - instance.mean(i);
    double coef = 0.0;
    bool ok = true;
    switch (kind.tag) {
      case PolicyTag::mts: {
        const double margin = rho * g - s1;
        coef = margin == 0.0 ? kInf : 2.0 * rho * rho / (margin * margin);
        ok = margin > 0.0;
        if (!ok) flag(i, "rho * Gamma_1i <= sigma_1^2");
        break;
      }
      case PolicyTag::vts: {
        const double hv = h(instance.variance(i) / s1);
        coef = reciprocal(hv);
        ok = vts_rho_ok && g * g > 2.0 * s1 * hv;
        if (g * g <= 2.0 * s1 * hv) flag(i, "Gamma_i^2 <= 2 sigma_1^2 h(sigma_i^2 / sigma_1^2)");
        break;
      }
      case PolicyTag::mvts: {
        const double hv = h(instance.variance(i) / s1);
        coef = std::max(2.0 * reciprocal(g * g), reciprocal(hv));
        break;
      }
      case PolicyTag::bmvts: {
        const double p1 = mu1;
        const double pi = instance.mean(i);
        const double c = 1.0 - rho - p1 - pi;
        coef = std::max(reciprocal(2.0 * g * g), reciprocal(2.0 * c * c));
        ok = rho > 0.0 && rho < 1.0;
        if (!ok) flag(i, "rho outside (0, 1)");
        break;
      }
      default:
        break;
    }
    if (std::isinf(coef)) flag(i, "degenerate gap, bound is vacuous");
    report.per_arm[i] = std::isinf(coef) ? kInf : coef * weight;
    report.assumptions_ok[i] = ok;
    report.total += report.per_arm[i];
  }

  if (instance.family() == Family::gaussian) {
    // rho -> inf: the best arm is the largest mean; rho -> 0: the smallest variance.
    std::size_t by_mean = 0, by_var = 0;
    for (std::size_t i = 1; i < k; ++i) {
      if (instance.mean(i) > instance.mean(by_mean)) by_mean = i;
      if (instance.variance(i) < instance.variance(by_var)) by_var = i;
    }
    double inf_sum = 0.0, zero_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (i != by_mean) inf_sum += 2.0 * reciprocal(instance.mean(by_mean) - instance.mean(i));
      if (i != by_var) {
        const double s1v = instance.variance(by_var);
        const double num = instance.variance(i) - s1v + 2.0 * gaps.gamma_max2[i];
        zero_sum += num * reciprocal(h(instance.variance(i) / s1v));
      }
    }
    report.limit_rho_inf = inf_sum;
    report.limit_rho_0 = zero_sum;
  }
  return report;
}

nlohmann::json to_json(const BoundReport& report) {
  auto number = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return "inf";
    return v;
  };
  nlohmann::json per_arm = nlohmann::json::array();
  for (double v : report.per_arm) per_arm.push_back(number(v));
  nlohmann::json j = {{"policy", std::string(to_string(report.policy))},
                      {"best_arm", report.best_arm},
                      {"per_arm_coefficient", per_arm},
                      {"total_coefficient", number(report.total)},
                      {"assumptions_ok", report.assumptions_ok},
                      {"notes", report.notes}};
  if (report.limit_rho_inf) j["limit_rho_inf"] = number(*report.limit_rho_inf);
  if (report.limit_rho_0) j["limit_rho_0"] = number(*report.limit_rho_0);
  return j;
}

}  // namespace mvbandit
