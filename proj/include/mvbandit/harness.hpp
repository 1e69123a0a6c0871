#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvbandit/env.hpp"
#include "mvbandit/policies.hpp"
#include "mvbandit/regret.hpp"

namespace mvbandit {

inline constexpr const char* kVersion = "mvbandit 0.1.0";

/// Everything needed to reproduce an experiment. Output bytes of
/// summary.csv/pulls.csv are a pure function of this value.
struct ExperimentConfig {
  explicit ExperimentConfig(BanditInstance inst) : instance(std::move(inst)) {}

  BanditInstance instance;
  std::vector<PolicyKind> policies;
  std::uint64_t horizon = 30000;
  std::uint64_t runs = 100;
  std::uint64_t base_seed = 0;
  /// Sorted, unique, within [1, horizon], last == horizon.
  std::vector<std::uint64_t> checkpoints;
  /// Used by sweeps; empty means the family default.
  std::vector<double> rho_grid;
  std::filesystem::path output_dir = "out";
  bool dump_runs = false;
  bool dump_posteriors = false;
  /// Worker cap; 0 means MVBANDIT_THREADS or the hardware concurrency.
  unsigned threads = 0;

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// `n_points` log-spaced checkpoints in [first, horizon], rounded and
/// deduplicated; always ends at horizon.
std::vector<std::uint64_t> log_checkpoints(std::uint64_t first, std::uint64_t horizon,
                                           std::size_t n_points = 60);

/// 13 log-spaced points in [1e-3, 1e3] (gaussian) or the ninths
/// 0.111, 0.222, ..., 0.889 (bernoulli).
std::vector<double> default_rho_grid(Family family);

/// Parses a config document. Relative instance paths resolve against
/// `base_dir`. Unknown keys are errors.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

enum class StreamRole : std::uint64_t { policy = 0, env = 1 };

/// Injective packing of (policy index < 2^7, rho index < 2^16, run < 2^40,
/// role) into a stream id. Throws ConfigError when an index is out of range.
std::uint64_t stream_id(std::size_t policy_index, std::size_t rho_index,
                        std::uint64_t run, StreamRole role);

/// Outcome of one simulated run, recorded at the checkpoints.
struct RunOutcome {
  std::vector<RegretBreakdown> at_checkpoint;
  std::vector<double> eq10_at_checkpoint;
  std::vector<std::uint64_t> final_pulls;
  nlohmann::json posteriors;  // null unless requested
};

/// Simulates `horizon` rounds of one policy. When `trace` is non-null the full
/// sequence of (arm, reward) is stored there as well.
RunOutcome simulate_run(const PolicyKind& kind, const BanditInstance& instance,
                        const GapTable& gaps, std::uint64_t horizon,
                        const std::vector<std::uint64_t>& checkpoints,
                        RandomStream& rng_policy, RandomStream& rng_env,
                        bool keep_posteriors = false, RunTrace* trace = nullptr);

struct CheckpointSummary {
  std::uint64_t checkpoint = 0;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
  double mean_pseudo_regret = 0.0;
  double stderr_pseudo_regret = 0.0;
  double mean_eq10_upper = 0.0;
};

struct RegretSummary {
  PolicyKind policy;
  std::size_t policy_index = 0;
  double rho = 0.0;
  std::size_t rho_index = 0;
  std::uint64_t runs = 0;
  std::vector<CheckpointSummary> checkpoints;
  std::vector<double> mean_pulls;
};

struct RunRecord {
  std::size_t policy_index;
  std::size_t rho_index;
  std::uint64_t run;
  RunOutcome outcome;
};

struct ExperimentResult {
  std::vector<RegretSummary> summaries;
  /// Filled only when the config asks for per-run dumps.
  std::vector<RunRecord> runs;
  double wall_seconds = 0.0;
  unsigned workers = 1;
};

/// Simulates every (policy, run) at the instance's rho.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Simulates every (policy, rho, run) over the grid, recording only the final
/// round.
ExperimentResult sweep_rho(const ExperimentConfig& config);

/// Writes summary.csv, pulls.csv, manifest.json (and runs/ when dumping) into
/// config.output_dir. Files are written to temporaries and renamed, so a
/// failure leaves no partial outputs.
void write_outputs(const ExperimentResult& result, const ExperimentConfig& config,
                   const std::string& mode = "simulate");

/// Shortest round-trip decimal form.
std::string format_double(double v);

std::string summary_csv(const std::vector<RegretSummary>& summaries);
std::string pulls_csv(const std::vector<RegretSummary>& summaries);

/// Worker count actually used for `config`.
unsigned resolve_threads(const ExperimentConfig& config);

}  // namespace mvbandit
