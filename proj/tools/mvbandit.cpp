// mvbandit: simulate mean-variance bandit policies, sweep the risk tolerance,
// evaluate asymptotic regret bounds, and run the built-in invariant checks.

#include <cmath>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mvbandit/bounds.hpp"
#include "mvbandit/harness.hpp"
#include "mvbandit/selfcheck.hpp"

namespace {

using namespace mvbandit;

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  bool dump_runs = false;
  bool dump_posteriors = false;
};

void add_run_options(CLI::App* cmd, RunOptions& opts) {
  cmd->add_option("--config", opts.config, "experiment config (JSON)")->required();
  cmd->add_option("--runs", opts.runs, "override the number of runs");
  cmd->add_option("--seed", opts.seed, "override the base seed");
  cmd->add_option("--out", opts.out, "output directory");
  cmd->add_option("--threads", opts.threads, "worker threads");
  cmd->add_flag("--dump-runs", opts.dump_runs, "write one JSON file per run");
  cmd->add_flag("--dump-posteriors", opts.dump_posteriors,
                "include final posterior states in the per-run dump");
}

ExperimentConfig resolve(const RunOptions& opts) {
  ExperimentConfig config = load_config(opts.config);
  if (opts.runs) config.runs = *opts.runs;
  if (opts.seed) config.base_seed = *opts.seed;
  if (opts.out) config.output_dir = *opts.out;
  if (opts.threads) config.threads = *opts.threads;
  config.dump_runs = opts.dump_runs || opts.dump_posteriors;
  config.dump_posteriors = opts.dump_posteriors;
  config.validate();
  return config;
}

void print_final(const ExperimentResult& result) {
  std::cout << std::left << std::setw(14) << "policy" << std::setw(12) << "rho"
            << std::setw(16) << "regret@n" << std::setw(14) << "stderr"
            << "pseudo@n\n";
  for (const auto& s : result.summaries) {
    const auto& c = s.checkpoints.back();
    std::cout << std::left << std::setw(14) << s.policy.label() << std::setw(12)
              << format_double(s.rho) << std::setw(16) << c.mean_regret << std::setw(14)
              << c.stderr_regret << c.mean_pseudo_regret << "\n";
  }
}

void print_bounds(const BoundReport& r) {
  std::cout << "policy " << to_string(r.policy) << ", best arm " << r.best_arm << "\n";
  std::cout << std::left << std::setw(6) << "arm" << std::setw(18) << "coefficient"
            << "assumptions\n";
  for (std::size_t i = 0; i < r.per_arm.size(); ++i) {
    std::cout << std::left << std::setw(6) << i << std::setw(18)
              << (i == r.best_arm ? std::string("(best)") : format_double(r.per_arm[i]))
              << (r.assumptions_ok[i] ? "ok" : "VIOLATED") << "\n";
  }
  std::cout << "total log(n) coefficient: " << format_double(r.total) << "\n";
  if (r.limit_rho_inf) std::cout << "limit_rho_inf: " << format_double(*r.limit_rho_inf) << "\n";
  if (r.limit_rho_0) std::cout << "limit_rho_0: " << format_double(*r.limit_rho_0) << "\n";
  for (const auto& note : r.notes) std::cout << "warning: " << note << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-averse (mean-variance) multi-armed bandit simulator"};
  app.require_subcommand(1);

  RunOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "run policies at the instance's rho");
  add_run_options(simulate, sim_opts);

  RunOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep-rho", "regret at the horizon over a rho grid");
  add_run_options(sweep, sweep_opts);

  std::string bounds_instance, bounds_policy;
  std::optional<double> bounds_rho;
  auto* bounds = app.add_subcommand("bounds", "asymptotic regret coefficients");
  bounds->add_option("--instance", bounds_instance, "instance file (JSON)")->required();
  bounds->add_option("--policy", bounds_policy, "mts|vts|mvts|bmvts")->required();
  bounds->add_option("--rho", bounds_rho, "override the instance's rho");

  bool quick = false;
  auto* check = app.add_subcommand("selfcheck", "run the invariant suites");
  check->add_flag("--quick", quick, "reduced grids");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate || *sweep) {
      const bool is_sweep = static_cast<bool>(*sweep);
      const ExperimentConfig config = resolve(is_sweep ? sweep_opts : sim_opts);
      for (auto i : config.instance.arms_with_variance_above_one()) {
        std::cerr << "warning: arm " << i << " has variance above 1\n";
      }
      const auto result = is_sweep ? sweep_rho(config) : run_experiment(config);
      write_outputs(result, config, is_sweep ? "sweep-rho" : "simulate");
      print_final(result);
      std::cout << "wrote " << config.output_dir.string() << " (" << std::fixed
                << std::setprecision(1) << result.wall_seconds << " s, " << result.workers
                << " workers)\n";
      return 0;
    }
    if (*bounds) {
      BanditInstance instance = load_instance(bounds_instance);
      if (bounds_rho) instance = instance.with_rho(*bounds_rho);
      const auto kind = parse_policy_tag(bounds_policy, instance.family());
      const auto report = asymptotic_regret_coefficient(kind, instance);
      std::cout << to_json(report).dump(2) << "\n\n";
      print_bounds(report);
      return 0;
    }
    if (*check) {
      SelfcheckOptions options;
      options.quick = quick;
      const auto report = selfcheck(options);
      report.print(std::cout);
      return report.all_passed() ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
