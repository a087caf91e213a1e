#pragma once

#include <array>
#include <span>
#include <vector>

#include "veo/lyapunov.hpp"
#include "veo/scenario.hpp"

namespace veo {

// Per-agent view of one slot. All values raw SI; scaling is a separate,
// exactly invertible step.
struct Observation {
  double task_bits = 0.0;
  double instr_bits = 0.0;
  double cpu_hz = 0.0;
  double pos_x = 0.0;
  double pos_y = 0.0;
  double speed = 0.0;
  struct RsuBlock {
    double x = 0.0;
    double lateral = 0.0;
    double cpu_hz = 0.0;
  };
  std::vector<RsuBlock> rsus;
  double local_backlog = 0.0;
  std::vector<double> rsu_backlogs;
  double virtual_energy = 0.0;
  std::array<double, 3> dt_aggregation{0.0, 0.0, 0.0};  // sum, mean, max

  static int dim(int num_rsus) { return 6 + 3 * num_rsus + 1 + num_rsus + 1 + 3; }
  std::vector<double> flat() const;
};

// Power-of-two per-field scaling chosen from config magnitudes, so applying
// and inverting the map reproduces raw values bit for bit.
class ObservationScaler {
 public:
  explicit ObservationScaler(const ScenarioConfig& cfg);
  std::vector<double> apply(const Observation& obs) const;
  std::vector<double> invert(std::span<const double> scaled) const;
  const std::vector<double>& scales() const { return scale_; }

 private:
  std::vector<double> scale_;
};

// Unconstrained per-agent output: [local split, K RSU splits, K bandwidth,
// K compute-share] logits.
struct RawAction {
  std::vector<double> logits;
  static int dim(int num_rsus) { return 1 + 3 * num_rsus; }
};

// Per-agent feasibility mapping (splits and bandwidth on the simplex, CPU
// request bounded by usable capacity).
SplitDecision project_action(const RawAction& raw, const ScenarioConfig& cfg);
// Joint projection: proportional rescale wherever one RSU is oversubscribed.
std::vector<SplitDecision> project_profile(std::span<const RawAction> raws,
                                           const ScenarioConfig& cfg);

// Full record of one environment transition.
struct SlotOutcome {
  int slot = 0;
  std::vector<SplitDecision> actions;
  std::vector<TaskSpec> tasks;
  std::vector<TaskOutcome> outcomes;
  SlotFlows flows;
  SlotObjective objective;
  std::vector<double> rates_bps;    // row-major (cv, rsu)
  std::vector<double> distances_m;  // row-major (cv, rsu)
  double reward = 0.0;
};

class Env {
 public:
  Env(const ScenarioConfig& cfg, bool dt_enabled);

  // Starts the next episode: fresh fleet, empty queues, slot-0 tasks.
  std::vector<Observation> reset();

  struct Step {
    std::vector<Observation> obs;
    double reward = 0.0;  // shared by all agents
    bool done = false;
    SlotOutcome outcome;
  };
  Step step(std::span<const RawAction> actions);

  Observation observe(int agent) const;
  std::vector<Observation> observe_all() const;
  // Scaled concatenation of every agent's observation (critic input).
  std::vector<double> global_state() const;

  int num_agents() const { return cfg_.num_cvs; }
  int obs_dim() const { return Observation::dim(cfg_.num_rsus); }
  int action_dim() const { return RawAction::dim(cfg_.num_rsus); }
  int global_dim() const { return num_agents() * obs_dim(); }
  int slot() const { return slot_; }
  int episode_index() const { return episode_; }
  bool dt_enabled() const { return dt_; }
  const ScenarioConfig& config() const { return cfg_; }
  const ObservationScaler& scaler() const { return scaler_; }
  const QueueState& queues() const { return queues_; }
  const std::vector<VehicleState>& vehicles() const { return fleet_; }
  const std::vector<RsuState>& rsus() const { return rsus_; }

  // Experiment hook: preload backlogs right after reset.
  void inject_backlogs(std::span<const double> local, std::span<const double> rsu);

 private:
  void draw_tasks();

  ScenarioConfig cfg_;
  bool dt_;
  ObservationScaler scaler_;
  std::vector<VehicleState> fleet_;
  std::vector<RsuState> rsus_;
  std::vector<TaskSpec> tasks_;
  QueueState queues_;
  std::vector<double> local_delay_;   // per CV, estimate for the coming slot
  std::vector<double> branch_delay_;  // per (CV, RSU)
  std::vector<Rng> task_streams_;     // per CV
  std::vector<Rng> channel_streams_;  // per (CV, RSU)
  int slot_ = 0;
  int episode_ = -1;
};

}  // namespace veo
