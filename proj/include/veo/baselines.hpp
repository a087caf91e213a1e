#pragma once

#include <string>
#include <vector>

#include "veo/env.hpp"

namespace veo {

enum class PolicyKind {
  random,
  all_local,
  all_edge_nearest,
  uniform_split,
  greedy_grid,
  trained,
};

// Parses a policy name; "trained:<path>" carries the checkpoint location.
struct PolicySpec {
  PolicyKind kind = PolicyKind::greedy_grid;
  std::string checkpoint_path;
};
PolicySpec parse_policy(const std::string& name);
std::string policy_name(PolicyKind kind);

struct HeuristicPolicy {
  PolicyKind kind = PolicyKind::uniform_split;
  double grid_step = 0.25;
};

// One grid cell of the greedy search.
struct GreedyCandidate {
  std::vector<double> split;      // local + per-RSU ratios, sums to 1
  std::vector<double> bandwidth;  // per-RSU shares, sums to 1
};

// All feasible (split, bandwidth) grid cells at the given step.
std::vector<GreedyCandidate> greedy_candidates(int num_rsus, double grid_step);

// Myopic slot objective for one vehicle: expected-channel rates, half-capacity
// CPU grants, zero queue-delay estimates, own drift terms only.
double greedy_candidate_score(const GreedyCandidate& cand, const Observation& obs,
                              const ScenarioConfig& cfg);

// Index of the best candidate (first minimum wins).
std::size_t greedy_select(const std::vector<GreedyCandidate>& cands, const Observation& obs,
                          const ScenarioConfig& cfg);

// Emits raw logits; projection reproduces the intended decision.
RawAction heuristic_act(const HeuristicPolicy& policy, const Observation& obs,
                        const ScenarioConfig& cfg, Rng& rng);

}  // namespace veo
