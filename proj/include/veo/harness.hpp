#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "veo/baselines.hpp"
#include "veo/csv.hpp"
#include "veo/marl.hpp"

namespace veo {

struct ExperimentPlan {
  enum class Mode { simulate, train, evaluate, sweep };
  Mode mode = Mode::simulate;
  std::string policy = "greedy_grid";
  bool dt_enabled = true;
  std::uint64_t seed = 1;
  int seeds = 1;
  int episodes = 0;  // 0 keeps the mode default
  std::string sweep_axis;                // num_cvs | lyapunov_v | dt_enabled
  std::vector<std::string> sweep_values;
  std::string out_dir;  // empty: timestamped directory under cwd
  int workers = 1;
  TrainerConfig trainer;

  void validate() const;  // throws ConfigError
};

// String accessors mirroring the CLI/C-API key space.
void plan_set_field(ExperimentPlan& plan, const std::string& key, const std::string& value);
std::string mode_name(ExperimentPlan::Mode mode);

struct SteadyMetrics {
  double steady_reward = 0.0;
  double coeff_variation = 0.0;
  int convergence_episode = 0;
};
// Last-50 mean, its coefficient of variation, and the first episode reaching
// 95% of the steady value. Requires at least 50 entries.
SteadyMetrics steady_metrics(std::span<const double> episode_rewards);

// Per-(cell, seed) outcome used for aggregation.
struct RunRecord {
  std::string cell;
  std::uint64_t seed = 0;
  TrainingLog log;
};

// Seed-order-independent mean/std aggregation into one summary row per cell.
CsvTable aggregate_runs(const std::vector<RunRecord>& runs);

// Runs one policy for a number of episodes; fills a TrainingLog-shaped record
// (loss columns zero for heuristics) and optionally full traces.
struct EpisodeTraces {
  CsvTable episode_trace;
  CsvTable queue_trace;
  CsvTable objective_trace;
};
TrainingLog run_policy(const ScenarioConfig& cfg, const PolicySpec& policy, bool dt_enabled,
                       int episodes, EpisodeTraces* traces = nullptr);

// Executes the whole plan; returns the artifact directory.
std::string run_plan(const ExperimentPlan& plan, const ScenarioConfig& cfg);

}  // namespace veo
