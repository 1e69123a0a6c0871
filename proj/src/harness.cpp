#include "mvbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace mvbandit {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  if (policies.empty()) throw ConfigError("config: at least one policy is required");
  for (const auto& p : policies) {
    if (p.family() != instance.family()) {
      throw ConfigError("config: policy " + std::string(to_string(p.tag)) +
                        " does not match the " +
                        std::string(to_string(instance.family())) + " instance");
    }
    if (!(p.lcb_width_scale > 0.0)) {
      throw ConfigError("config: lcb_width_scale must be positive");
    }
  }
  if (policies.size() > 127) throw ConfigError("config: at most 127 policies");
  if (horizon < instance.size()) {
    throw ConfigError("config: horizon must be at least the number of arms");
  }
  if (runs < 1) throw ConfigError("config: runs must be at least 1");
  if (runs >= (std::uint64_t{1} << 40)) throw ConfigError("config: too many runs");
  if (checkpoints.empty()) throw ConfigError("config: checkpoints must be nonempty");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > horizon) {
      throw ConfigError("config: checkpoint " + std::to_string(checkpoints[i]) +
                        " outside [1, horizon]");
    }
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
      throw ConfigError("config: checkpoints must be strictly increasing");
    }
  }
  if (checkpoints.back() != horizon) {
    throw ConfigError("config: the last checkpoint must equal the horizon");
  }
  if (rho_grid.size() >= (std::size_t{1} << 16)) throw ConfigError("config: rho grid too large");
  for (double r : rho_grid) {
    if (!std::isfinite(r) || r < 0.0) throw ConfigError("config: rho grid values must be >= 0");
  }
}

std::vector<std::uint64_t> log_checkpoints(std::uint64_t first, std::uint64_t horizon,
                                           std::size_t n_points) {
  first = std::clamp<std::uint64_t>(first, 1, horizon);
  std::vector<std::uint64_t> out;
  if (n_points < 2 || first == horizon) return {horizon};
  const double lo = std::log(static_cast<double>(first));
  const double hi = std::log(static_cast<double>(horizon));
  for (std::size_t i = 0; i < n_points; ++i) {
    const double v = std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                       static_cast<double>(n_points - 1));
    auto c = static_cast<std::uint64_t>(std::llround(v));
    c = std::clamp(c, first, horizon);
    if (out.empty() || c > out.back()) out.push_back(c);
  }
  if (out.back() != horizon) out.push_back(horizon);
  return out;
}

std::vector<double> default_rho_grid(Family family) {
  std::vector<double> grid;
  if (family == Family::gaussian) {
    for (int i = 0; i < 13; ++i) grid.push_back(std::pow(10.0, -3.0 + 0.5 * i));
  } else {
    grid = {0.111, 0.222, 0.333, 0.444, 0.556, 0.667, 0.778, 0.889};
  }
  return grid;
}

namespace {

std::uint64_t read_uint(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(std::string("config: '") + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::set<std::string> known = {
      "instance", "rho", "policies", "horizon", "runs", "seed",
      "checkpoints", "num_checkpoints", "rho_grid", "output_dir", "threads"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
  }
  if (!j.contains("instance")) throw ConfigError("config: missing 'instance'");
  const auto& inst = j.at("instance");
  BanditInstance instance = inst.is_string()
                                ? load_instance(base_dir / inst.get<std::string>())
                                : instance_from_json(inst);
  if (j.contains("rho")) {
    if (!j.at("rho").is_number()) throw ConfigError("config: 'rho' must be a number");
    instance = instance.with_rho(j.at("rho").get<double>());
  }

  ExperimentConfig config(instance);
  if (!j.contains("policies") || !j.at("policies").is_array()) {
    throw ConfigError("config: 'policies' must be an array");
  }
  for (const auto& p : j.at("policies")) {
    config.policies.push_back(policy_from_json(p, instance.family()));
  }
  if (j.contains("horizon")) config.horizon = read_uint(j, "horizon");
  if (j.contains("runs")) config.runs = read_uint(j, "runs");
  if (j.contains("seed")) config.base_seed = read_uint(j, "seed");
  if (j.contains("threads")) config.threads = static_cast<unsigned>(read_uint(j, "threads"));
  if (j.contains("checkpoints") && j.contains("num_checkpoints")) {
    throw ConfigError("config: give either 'checkpoints' or 'num_checkpoints'");
  }
  if (j.contains("checkpoints")) {
    const auto& c = j.at("checkpoints");
    if (!c.is_array()) throw ConfigError("config: 'checkpoints' must be an array");
    for (const auto& v : c) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError("config: checkpoints must be nonnegative integers");
      }
      config.checkpoints.push_back(v.get<std::uint64_t>());
    }
  } else {
    std::size_t points = 60;
    if (j.contains("num_checkpoints")) points = read_uint(j, "num_checkpoints");
    config.checkpoints = log_checkpoints(instance.size(), config.horizon, points);
  }
  if (j.contains("rho_grid")) {
    const auto& g = j.at("rho_grid");
    if (!g.is_array()) throw ConfigError("config: 'rho_grid' must be an array");
    for (const auto& v : g) {
      if (!v.is_number()) throw ConfigError("config: rho_grid must hold numbers");
      config.rho_grid.push_back(v.get<double>());
    }
  }
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) {
      throw ConfigError("config: 'output_dir' must be a string");
    }
    config.output_dir = j.at("output_dir").get<std::string>();
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json policies = nlohmann::json::array();
  for (const auto& p : config.policies) policies.push_back(policy_to_json(p));
  return {{"instance", instance_to_json(config.instance)},
          {"policies", policies},
          {"horizon", config.horizon},
          {"runs", config.runs},
          {"seed", config.base_seed},
          {"checkpoints", config.checkpoints},
          {"rho_grid", config.rho_grid},
          {"output_dir", config.output_dir.string()}};
}

std::uint64_t stream_id(std::size_t policy_index, std::size_t rho_index,
                        std::uint64_t run, StreamRole role) {
  if (policy_index >= (std::size_t{1} << 7) || rho_index >= (std::size_t{1} << 16) ||
      run >= (std::uint64_t{1} << 40)) {
    throw ConfigError("stream_id: index out of range");
  }
  return (static_cast<std::uint64_t>(role) << 63) |
         (static_cast<std::uint64_t>(policy_index) << 56) |
         (static_cast<std::uint64_t>(rho_index) << 40) | run;
}

RunOutcome simulate_run(const PolicyKind& kind, const BanditInstance& instance,
                        const GapTable& gaps, std::uint64_t horizon,
                        const std::vector<std::uint64_t>& checkpoints,
                        RandomStream& rng_policy, RandomStream& rng_env,
                        bool keep_posteriors, RunTrace* trace) {
  PolicyState state = make_policy_state(kind, instance);
  RegretAccumulator acc(instance.size());
  RunOutcome out;
  out.at_checkpoint.reserve(checkpoints.size());
  out.eq10_at_checkpoint.reserve(checkpoints.size());
  std::vector<std::size_t> arms;
  std::vector<double> rewards;
  if (trace) {
    arms.reserve(horizon);
    rewards.reserve(horizon);
  }
  std::size_t next_checkpoint = 0;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const StepResult r = step(kind, state, instance, rng_policy, rng_env);
    acc.add(r.arm, r.reward);
    if (trace) {
      arms.push_back(r.arm);
      rewards.push_back(r.reward);
    }
    if (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == t) {
      out.at_checkpoint.push_back(acc.breakdown(gaps, instance.rho()));
      out.eq10_at_checkpoint.push_back(acc.eq10_upper(gaps));
      ++next_checkpoint;
    }
  }
  out.final_pulls = acc.pulls();
  if (keep_posteriors) out.posteriors = posteriors_to_json(state);
  if (trace) *trace = RunTrace::from(std::move(arms), std::move(rewards), instance.size());
  return out;
}

unsigned resolve_threads(const ExperimentConfig& config) {
  unsigned n = config.threads;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MVBANDIT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

namespace {

struct Job {
  std::size_t policy_index;
  std::size_t rho_index;
  std::uint64_t run;
};

// Runs every (policy, rho, run) over a worker pool and reduces in canonical
// (policy, rho, run) order.
ExperimentResult execute(const ExperimentConfig& config, const std::vector<double>& rhos,
                         const std::vector<std::uint64_t>& checkpoints) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  std::vector<BanditInstance> instances;
  std::vector<GapTable> gap_tables;
  for (double rho : rhos) {
    instances.push_back(config.instance.with_rho(rho));
    gap_tables.push_back(gap_table(instances.back()));
  }

  std::vector<Job> jobs;
  for (std::size_t p = 0; p < config.policies.size(); ++p) {
    for (std::size_t r = 0; r < rhos.size(); ++r) {
      for (std::uint64_t run = 0; run < config.runs; ++run) jobs.push_back({p, r, run});
    }
  }
  std::vector<RunOutcome> outcomes(jobs.size());

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(config), jobs.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= jobs.size()) return;
      const Job& job = jobs[idx];
      try {
        RandomStream rng_policy(config.base_seed, stream_id(job.policy_index, job.rho_index,
                                                            job.run, StreamRole::policy));
        RandomStream rng_env(config.base_seed, stream_id(job.policy_index, job.rho_index,
                                                         job.run, StreamRole::env));
        outcomes[idx] = simulate_run(config.policies[job.policy_index],
                                     instances[job.rho_index], gap_tables[job.rho_index],
                                     config.horizon, checkpoints, rng_policy, rng_env,
                                     config.dump_posteriors);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs.size());
        return;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  result.workers = std::max(1u, workers);
  const std::size_t k = config.instance.size();
  std::size_t idx = 0;
  for (std::size_t p = 0; p < config.policies.size(); ++p) {
    for (std::size_t r = 0; r < rhos.size(); ++r) {
      std::vector<RunningStat> regret(checkpoints.size()), pseudo(checkpoints.size()),
          eq10(checkpoints.size());
      std::vector<RunningStat> pulls(k);
      for (std::uint64_t run = 0; run < config.runs; ++run, ++idx) {
        const RunOutcome& o = outcomes[idx];
        for (std::size_t c = 0; c < checkpoints.size(); ++c) {
          regret[c].add(o.at_checkpoint[c].realized_regret);
          pseudo[c].add(o.at_checkpoint[c].pseudo_regret());
          eq10[c].add(o.eq10_at_checkpoint[c]);
        }
        for (std::size_t i = 0; i < k; ++i) pulls[i].add(static_cast<double>(o.final_pulls[i]));
      }
      RegretSummary s;
      s.policy = config.policies[p];
      s.policy_index = p;
      s.rho = rhos[r];
      s.rho_index = r;
      s.runs = config.runs;
      for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        s.checkpoints.push_back({checkpoints[c], regret[c].mean(), regret[c].standard_error(),
                                 pseudo[c].mean(), pseudo[c].standard_error(),
                                 eq10[c].mean()});
      }
      for (const auto& st : pulls) s.mean_pulls.push_back(st.mean());
      result.summaries.push_back(std::move(s));
    }
  }
  if (config.dump_runs || config.dump_posteriors) {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      result.runs.push_back(
          {jobs[i].policy_index, jobs[i].rho_index, jobs[i].run, std::move(outcomes[i])});
    }
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return execute(config, {config.instance.rho()}, config.checkpoints);
}

ExperimentResult sweep_rho(const ExperimentConfig& config) {
  std::vector<double> grid = config.rho_grid;
  if (grid.empty()) grid = default_rho_grid(config.instance.family());
  return execute(config, grid, {config.horizon});
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string summary_csv(const std::vector<RegretSummary>& summaries) {
  std::string out =
      "policy,rho,checkpoint,mean_regret,stderr_regret,mean_pseudo_regret,mean_eq10_upper\n";
  for (const auto& s : summaries) {
    const std::string prefix = s.policy.label() + "," + format_double(s.rho) + ",";
    for (const auto& c : s.checkpoints) {
      out += prefix + std::to_string(c.checkpoint) + "," + format_double(c.mean_regret) +
             "," + format_double(c.stderr_regret) + "," +
             format_double(c.mean_pseudo_regret) + "," + format_double(c.mean_eq10_upper) +
             "\n";
    }
  }
  return out;
}

std::string pulls_csv(const std::vector<RegretSummary>& summaries) {
  std::string out = "policy,rho,arm,mean_pulls\n";
  for (const auto& s : summaries) {
    for (std::size_t i = 0; i < s.mean_pulls.size(); ++i) {
      out += s.policy.label() + "," + format_double(s.rho) + "," + std::to_string(i) + "," +
             format_double(s.mean_pulls[i]) + "\n";
    }
  }
  return out;
}

namespace {

// Collects files written under temporary names; commit() renames them into
// place, destruction without commit removes them.
class StagedFiles {
 public:
  ~StagedFiles() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& [tmp, _] : files_) fs::remove(tmp, ec);
  }

  void write(const fs::path& target, const std::string& contents) {
    fs::path tmp = target;
    tmp += ".tmp";
    files_.emplace_back(tmp, target);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.close();
    if (!out) throw std::runtime_error("error while writing " + tmp.string());
  }

  void commit() {
    for (const auto& [tmp, target] : files_) {
      std::error_code ec;
      fs::rename(tmp, target, ec);
      if (ec) {
        throw std::runtime_error("cannot move " + tmp.string() + " to " + target.string() +
                                 ": " + ec.message());
      }
    }
    committed_ = true;
  }

 private:
  std::vector<std::pair<fs::path, fs::path>> files_;
  bool committed_ = false;
};

nlohmann::json breakdown_json(const RegretBreakdown& b, double eq10) {
  return {{"realized_regret", b.realized_regret}, {"r1", b.r1},
          {"r2", b.r2},
          {"pseudo_first", b.pseudo_first},
          {"pseudo_cross", b.pseudo_cross},
          {"eq10_upper", eq10}};
}

}  // namespace

void write_outputs(const ExperimentResult& result, const ExperimentConfig& config,
                   const std::string& mode) {
  const fs::path dir = config.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  StagedFiles staged;
  staged.write(dir / "summary.csv", summary_csv(result.summaries));
  staged.write(dir / "pulls.csv", pulls_csv(result.summaries));

  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& s : result.summaries) {
    seeds.push_back({{"policy", s.policy.label()},
                     {"rho", s.rho},
                     {"base_seed", config.base_seed},
                     {"first_policy_stream", stream_id(s.policy_index, s.rho_index, 0,
                                                       StreamRole::policy)},
                     {"first_env_stream",
                      stream_id(s.policy_index, s.rho_index, 0, StreamRole::env)}});
  }
  nlohmann::json manifest = {{"version", kVersion},
                             {"mode", mode},
                             {"config", config_to_json(config)},
                             {"seeds", seeds},
                             {"workers", result.workers},
                             {"wall_clock_seconds", result.wall_seconds}};
  staged.write(dir / "manifest.json", manifest.dump(2) + "\n");

  if (!result.runs.empty()) {
    fs::create_directories(dir / "runs", ec);
    if (ec) throw std::runtime_error("cannot create " + (dir / "runs").string());
    std::vector<double> rhos;
    for (const auto& s : result.summaries) {
      if (rhos.size() <= s.rho_index) rhos.resize(s.rho_index + 1);
      rhos[s.rho_index] = s.rho;
    }
    std::vector<std::uint64_t> checkpoints;
    if (!result.summaries.empty()) {
      for (const auto& c : result.summaries.front().checkpoints) checkpoints.push_back(c.checkpoint);
    }
    for (const auto& rec : result.runs) {
      const auto& o = rec.outcome;
      nlohmann::json cps = nlohmann::json::array();
      for (std::size_t c = 0; c < o.at_checkpoint.size(); ++c) {
        auto b = breakdown_json(o.at_checkpoint[c], o.eq10_at_checkpoint[c]);
        b["checkpoint"] = checkpoints.at(c);
        cps.push_back(std::move(b));
      }
      nlohmann::json doc = {{"policy", config.policies[rec.policy_index].label()},
                            {"rho", rhos.at(rec.rho_index)},
                            {"run", rec.run},
                            {"checkpoints", cps},
                            {"pulls", o.final_pulls}};
      if (!o.posteriors.is_null()) doc["posteriors"] = o.posteriors;
      const std::string name = config.policies[rec.policy_index].label() + "_p" +
                               std::to_string(rec.policy_index) + "_rho" +
                               std::to_string(rec.rho_index) + "_run" +
                               std::to_string(rec.run) + ".json";
      staged.write(dir / "runs" / name, doc.dump(2) + "\n");
    }
  }
  staged.commit();
}

}  // namespace mvbandit
