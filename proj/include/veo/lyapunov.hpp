#pragma once

#include <span>
#include <vector>

#include "veo/compute.hpp"
#include "veo/queues.hpp"

namespace veo {

// Everything that moved through the queues in one slot, in the exact units the
// queue updates consume. Services are rates; multiply by slot duration.
struct SlotFlows {
  std::vector<double> local_arrival_cycles;  // per CV
  std::vector<double> local_service_hz;      // per CV
  std::vector<double> rsu_arrival_cycles;    // per RSU, summed over CVs
  std::vector<double> rsu_service_hz;        // per RSU, allocated this slot
  double e_total_j = 0.0;
};

// Per-slot scalarization: cost, drift pieces, bound constant, reward.
struct SlotObjective {
  double cost = 0.0;
  std::vector<double> local_drift_terms;  // per CV
  std::vector<double> rsu_drift_terms;    // per RSU
  std::vector<double> virtual_terms;      // per CV, identical replicas
  double penalty_weighted_cost = 0.0;
  double p2_value = 0.0;
  double reward = 0.0;
  double lyapunov_value = 0.0;  // of the pre-update state
  double bound_constant_b = 0.0;

  double drift_sum() const;
};

double slot_cost(std::span<const TaskOutcome> outcomes, const ScenarioConfig& cfg);
double lyapunov_value(const QueueState& z);

// Linear drift terms of each queue plus the quadratic constant; the realized
// one-slot change of lyapunov_value never exceeds drift_sum() + bound.
SlotObjective drift_bound_terms(const QueueState& z, const SlotFlows& flows,
                                const ScenarioConfig& cfg);

double p2_objective(const QueueState& z, std::span<const TaskOutcome> outcomes,
                    const SlotFlows& flows, const ScenarioConfig& cfg);
double slot_reward(const QueueState& z, std::span<const TaskOutcome> outcomes,
                   const SlotFlows& flows, const ScenarioConfig& cfg);

// One-stop evaluation used by the environment and the trace writers.
SlotObjective evaluate_slot(const QueueState& z, std::span<const TaskOutcome> outcomes,
                            const SlotFlows& flows, const ScenarioConfig& cfg);

}  // namespace veo
