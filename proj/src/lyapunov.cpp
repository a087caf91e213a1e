#include "veo/lyapunov.hpp"

#include <algorithm>
#include <stdexcept>

namespace veo {

double SlotObjective::drift_sum() const {
  double s = 0.0;
  for (double t : local_drift_terms) s += t;
  for (double t : rsu_drift_terms) s += t;
  for (double t : virtual_terms) s += t;
  return s;
}

double slot_cost(std::span<const TaskOutcome> outcomes, const ScenarioConfig& cfg) {
  double c = 0.0;
  for (const auto& o : outcomes)
    c += cfg.alpha * o.task_latency_s + (1.0 - cfg.alpha) * o.task_energy_j;
  return c;
}

double lyapunov_value(const QueueState& z) {
  double s = 0.0;
  for (double q : z.local_backlog) s += q * q;
  for (double q : z.rsu_backlog) s += q * q;
  s += z.num_cvs() * z.virtual_energy * z.virtual_energy;
  return 0.5 * s;
}

SlotObjective drift_bound_terms(const QueueState& z, const SlotFlows& flows,
                                const ScenarioConfig& cfg) {
  const int num_cvs = z.num_cvs();
  const int num_rsus = z.num_rsus();
  if (static_cast<int>(flows.local_arrival_cycles.size()) != num_cvs ||
      static_cast<int>(flows.local_service_hz.size()) != num_cvs ||
      static_cast<int>(flows.rsu_arrival_cycles.size()) != num_rsus ||
      static_cast<int>(flows.rsu_service_hz.size()) != num_rsus)
    throw std::invalid_argument("drift_bound_terms: flow sizes disagree with queue state");

  SlotObjective obj;
  obj.local_drift_terms.resize(num_cvs);
  obj.rsu_drift_terms.resize(num_rsus);
  obj.virtual_terms.resize(num_cvs);
  obj.lyapunov_value = lyapunov_value(z);

  const double tau = cfg.slot_duration_s;
  double b = 0.0;
  for (int i = 0; i < num_cvs; ++i) {
    const double gap = flows.local_arrival_cycles[i] - flows.local_service_hz[i] * tau;
    obj.local_drift_terms[i] = z.local_backlog[i] * gap;
    b += 0.5 * gap * gap;
  }
  for (int k = 0; k < num_rsus; ++k) {
    const double gap = flows.rsu_arrival_cycles[k] - flows.rsu_service_hz[k] * tau;
    obj.rsu_drift_terms[k] = z.rsu_backlog[k] * gap;
    b += 0.5 * gap * gap;
  }
  const double egap = flows.e_total_j - cfg.energy_budget_w;
  for (int i = 0; i < num_cvs; ++i) obj.virtual_terms[i] = z.virtual_energy * egap;
  b += num_cvs * 0.5 * egap * egap;
  obj.bound_constant_b = b;
  return obj;
}

double p2_objective(const QueueState& z, std::span<const TaskOutcome> outcomes,
                    const SlotFlows& flows, const ScenarioConfig& cfg) {
  const SlotObjective obj = drift_bound_terms(z, flows, cfg);
  return cfg.lyapunov_v * slot_cost(outcomes, cfg) + obj.drift_sum();
}

double slot_reward(const QueueState& z, std::span<const TaskOutcome> outcomes,
                   const SlotFlows& flows, const ScenarioConfig& cfg) {
  double penalty = 0.0;
  for (const auto& o : outcomes)
    penalty += std::max(0.0, o.task_latency_s - cfg.t_max_s);
  return -p2_objective(z, outcomes, flows, cfg) - cfg.deadline_penalty * penalty;
}

SlotObjective evaluate_slot(const QueueState& z, std::span<const TaskOutcome> outcomes,
                            const SlotFlows& flows, const ScenarioConfig& cfg) {
  SlotObjective obj = drift_bound_terms(z, flows, cfg);
  obj.cost = slot_cost(outcomes, cfg);
  obj.penalty_weighted_cost = cfg.lyapunov_v * obj.cost;
  obj.p2_value = obj.penalty_weighted_cost + obj.drift_sum();
  double penalty = 0.0;
  for (const auto& o : outcomes)
    penalty += std::max(0.0, o.task_latency_s - cfg.t_max_s);
  obj.reward = -obj.p2_value - cfg.deadline_penalty * penalty;
  return obj;
}

}  // namespace veo
