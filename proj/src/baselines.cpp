#include "veo/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace veo {

PolicySpec parse_policy(const std::string& name) {
  PolicySpec spec;
  if (name == "random") spec.kind = PolicyKind::random;
  else if (name == "all_local") spec.kind = PolicyKind::all_local;
  else if (name == "all_edge_nearest") spec.kind = PolicyKind::all_edge_nearest;
  else if (name == "uniform_split") spec.kind = PolicyKind::uniform_split;
  else if (name == "greedy_grid") spec.kind = PolicyKind::greedy_grid;
  else if (name.rfind("trained:", 0) == 0) {
    spec.kind = PolicyKind::trained;
    spec.checkpoint_path = name.substr(8);
    if (spec.checkpoint_path.empty())
      throw std::invalid_argument("policy: trained:<checkpoint path> requires a path");
  } else {
    throw std::invalid_argument("policy: unknown name '" + name + "'");
  }
  return spec;
}

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::random: return "random";
    case PolicyKind::all_local: return "all_local";
    case PolicyKind::all_edge_nearest: return "all_edge_nearest";
    case PolicyKind::uniform_split: return "uniform_split";
    case PolicyKind::greedy_grid: return "greedy_grid";
    case PolicyKind::trained: return "trained";
  }
  return "?";
}

namespace {

constexpr double kLogFloor = -27.631021115928547;  // log(1e-12)

double safe_log(double v) { return v > 1e-12 ? std::log(v) : kLogFloor; }

// Enumerates grid vectors of the given length summing to 1.
void enumerate_simplex(int len, const std::vector<double>& grid, std::vector<double>& cur,
                       double sum, std::vector<std::vector<double>>& out) {
  if (len == 1) {
    const double last = 1.0 - sum;
    for (double g : grid)
      if (std::abs(g - last) < 1e-9) {
        cur.push_back(g);
        out.push_back(cur);
        cur.pop_back();
        return;
      }
    return;
  }
  for (double g : grid) {
    if (sum + g > 1.0 + 1e-9) continue;
    cur.push_back(g);
    enumerate_simplex(len - 1, grid, cur, sum + g, out);
    cur.pop_back();
  }
}

int nearest_rsu(const Observation& obs, const ScenarioConfig& cfg) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < obs.rsus.size(); ++k) {
    const double dx = cfg.static_distance ? 0.0 : (obs.rsus[k].x - obs.pos_x);
    const double dy = obs.pos_y - obs.rsus[k].lateral;
    const double d = std::sqrt(dx * dx + dy * dy + cfg.rsu_height_m * cfg.rsu_height_m);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(k);
    }
  }
  return best;
}

}  // namespace

std::vector<GreedyCandidate> greedy_candidates(int num_rsus, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1.0))
    throw std::invalid_argument("greedy: grid_step must lie in (0, 1]");
  std::vector<double> grid;
  for (double g = 0.0; g < 1.0 + 1e-9; g += grid_step) grid.push_back(std::min(g, 1.0));

  std::vector<std::vector<double>> splits, bands;
  std::vector<double> cur;
  enumerate_simplex(num_rsus + 1, grid, cur, 0.0, splits);
  enumerate_simplex(num_rsus, grid, cur, 0.0, bands);

  std::vector<GreedyCandidate> cands;
  cands.reserve(splits.size() * bands.size());
  for (const auto& s : splits)
    for (const auto& b : bands) cands.push_back({s, b});
  return cands;
}

double greedy_candidate_score(const GreedyCandidate& cand, const Observation& obs,
                              const ScenarioConfig& cfg) {
  const int k = cfg.num_rsus;
  SplitDecision d;
  d.local_ratio = cand.split[0];
  d.rsu_ratios.assign(cand.split.begin() + 1, cand.split.end());
  d.bandwidth = cand.bandwidth;
  d.rsu_cpu_hz.assign(k, 0.5 * cfg.rsu_usable_hz());

  TaskSpec task;
  task.task_bits = obs.task_bits;
  task.instr_bits = obs.instr_bits;
  task.cpu_hz = obs.cpu_hz;
  // Intensities are not observable per draw; mid-range stands in.
  task.task_intensity = 0.5 * (cfg.task_intensity_range.lo + cfg.task_intensity_range.hi);
  task.cotra_intensity = 0.5 * (cfg.cotra_intensity_range.lo + cfg.cotra_intensity_range.hi);
  task.t_max_s = cfg.t_max_s;

  std::vector<double> rates(k, 0.0);
  for (int j = 0; j < k; ++j) {
    const double dx = cfg.static_distance ? 0.0 : (obs.rsus[j].x - obs.pos_x);
    const double dy = obs.pos_y - obs.rsus[j].lateral;
    const double dist = std::sqrt(dx * dx + dy * dy + cfg.rsu_height_m * cfg.rsu_height_m);
    if (dist <= cfg.rsu_coverage_m)
      rates[j] = v2i_rate(d.bandwidth[j], 1.0, pathloss_gain(dist), cfg);
  }

  QueueDelays delays;
  delays.rsu_s.assign(k, 0.0);
  TaskOutcome out = evaluate_task(d, task, rates, delays, cfg);
  if (!std::isfinite(out.task_latency_s)) out.task_latency_s = 10.0 * cfg.t_max_s;

  const double tau = cfg.slot_duration_s;
  double score = cfg.lyapunov_v *
                 (cfg.alpha * out.task_latency_s + (1.0 - cfg.alpha) * out.task_energy_j);
  score += obs.local_backlog * (out.local_arrival_cycles - obs.cpu_hz * tau);
  for (int j = 0; j < k; ++j)
    score += obs.rsu_backlogs[j] * (out.rsu_arrival_cycles[j] - d.rsu_cpu_hz[j] * tau);
  score += cfg.num_cvs * obs.virtual_energy * out.task_energy_j;
  score += cfg.deadline_penalty * std::max(0.0, out.task_latency_s - cfg.t_max_s);
  return score;
}

std::size_t greedy_select(const std::vector<GreedyCandidate>& cands, const Observation& obs,
                          const ScenarioConfig& cfg) {
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cands.size(); ++c) {
    const double s = greedy_candidate_score(cands[c], obs, cfg);
    if (s < best_score) {
      best_score = s;
      best = c;
    }
  }
  return best;
}

RawAction heuristic_act(const HeuristicPolicy& policy, const Observation& obs,
                        const ScenarioConfig& cfg, Rng& rng) {
  const int k = cfg.num_rsus;
  RawAction a;
  a.logits.assign(RawAction::dim(k), 0.0);

  switch (policy.kind) {
    case PolicyKind::random:
      for (auto& v : a.logits) v = rng.normal();
      break;
    case PolicyKind::all_local:
      for (int j = 0; j <= k; ++j) a.logits[j] = (j == 0) ? 10.0 : -10.0;
      for (int j = 0; j < k; ++j) a.logits[1 + 2 * k + j] = -10.0;
      break;
    case PolicyKind::all_edge_nearest: {
      const int near = nearest_rsu(obs, cfg);
      for (int j = 0; j <= k; ++j) a.logits[j] = (j == near + 1) ? 10.0 : -10.0;
      for (int j = 0; j < k; ++j) a.logits[1 + k + j] = (j == near) ? 10.0 : -10.0;
      for (int j = 0; j < k; ++j) a.logits[1 + 2 * k + j] = (j == near) ? 10.0 : 0.0;
      break;
    }
    case PolicyKind::uniform_split:
      break;  // zeros already
    case PolicyKind::greedy_grid: {
      const auto cands = greedy_candidates(k, policy.grid_step);
      const auto& best = cands[greedy_select(cands, obs, cfg)];
      for (int j = 0; j <= k; ++j) a.logits[j] = safe_log(best.split[j]);
      for (int j = 0; j < k; ++j) a.logits[1 + k + j] = safe_log(best.bandwidth[j]);
      break;  // compute-share logits 0: request half the usable capacity
    }
    case PolicyKind::trained:
      throw std::invalid_argument("heuristic_act: trained policies act through marl");
  }
  return a;
}

}  // namespace veo
