#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "veo/baselines.hpp"

using namespace veo;
using doctest::Approx;

namespace {

Observation reference_obs(const ScenarioConfig& cfg, double x) {
  Observation obs;
  obs.task_bits = 2e6;
  obs.instr_bits = 2e4;
  obs.cpu_hz = 2.5e9;
  obs.pos_x = x;
  obs.pos_y = 1.875;
  obs.speed = 14.0;
  const auto rsus = make_rsus(cfg);
  obs.rsus.resize(rsus.size());
  for (std::size_t k = 0; k < rsus.size(); ++k)
    obs.rsus[k] = {rsus[k].x, rsus[k].lateral_m, rsus[k].cpu_hz};
  obs.rsu_backlogs.assign(cfg.num_rsus, 0.0);
  return obs;
}

// Mirror of the greedy scoring convention: expected channel, half-capacity
// grants, mid-range intensities, zero delay estimates, own drift terms.
double reference_score(const GreedyCandidate& cand, const Observation& obs,
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
  task.task_intensity = 0.5 * (cfg.task_intensity_range.lo + cfg.task_intensity_range.hi);
  task.cotra_intensity = 0.5 * (cfg.cotra_intensity_range.lo + cfg.cotra_intensity_range.hi);
  task.t_max_s = cfg.t_max_s;

  std::vector<double> rates(k, 0.0);
  for (int j = 0; j < k; ++j) {
    const double dx = cfg.static_distance ? 0.0 : (obs.rsus[j].x - obs.pos_x);
    const double dy = obs.pos_y - obs.rsus[j].lateral;
    const double dist = std::sqrt(dx * dx + dy * dy + cfg.rsu_height_m * cfg.rsu_height_m);
    if (dist <= cfg.rsu_coverage_m) rates[j] = v2i_rate(d.bandwidth[j], 1.0, pathloss_gain(dist), cfg);
  }
  QueueDelays delays;
  delays.rsu_s.assign(k, 0.0);
  TaskOutcome out = evaluate_task(d, task, rates, delays, cfg);
  if (!std::isfinite(out.task_latency_s)) out.task_latency_s = 10.0 * cfg.t_max_s;

  double score =
      cfg.lyapunov_v * (cfg.alpha * out.task_latency_s + (1.0 - cfg.alpha) * out.task_energy_j);
  score += obs.local_backlog * (out.local_arrival_cycles - obs.cpu_hz * cfg.slot_duration_s);
  for (int j = 0; j < k; ++j)
    score += obs.rsu_backlogs[j] *
             (out.rsu_arrival_cycles[j] - d.rsu_cpu_hz[j] * cfg.slot_duration_s);
  score += cfg.num_cvs * obs.virtual_energy * out.task_energy_j;
  score += cfg.deadline_penalty * std::max(0.0, out.task_latency_s - cfg.t_max_s);
  return score;
}

}  // namespace

TEST_CASE("policy names parse and print") {
  CHECK(parse_policy("random").kind == PolicyKind::random);
  CHECK(parse_policy("all_local").kind == PolicyKind::all_local);
  CHECK(parse_policy("all_edge_nearest").kind == PolicyKind::all_edge_nearest);
  CHECK(parse_policy("uniform_split").kind == PolicyKind::uniform_split);
  CHECK(parse_policy("greedy_grid").kind == PolicyKind::greedy_grid);
  const PolicySpec t = parse_policy("trained:runs/ckpt.txt");
  CHECK(t.kind == PolicyKind::trained);
  CHECK(t.checkpoint_path == "runs/ckpt.txt");
  CHECK_THROWS_AS(parse_policy("trained:"), std::invalid_argument);
  CHECK_THROWS_AS(parse_policy("bogus"), std::invalid_argument);

  for (PolicyKind k : {PolicyKind::random, PolicyKind::all_local, PolicyKind::all_edge_nearest,
                       PolicyKind::uniform_split, PolicyKind::greedy_grid})
    CHECK(parse_policy(policy_name(k)).kind == k);
  CHECK(policy_name(PolicyKind::trained) == "trained");
}

TEST_CASE("grid candidates cover the simplex at the requested step") {
  const auto cands = greedy_candidates(2, 0.25);
  CHECK(cands.size() == 15 * 5);
  for (const auto& c : cands) {
    REQUIRE(c.split.size() == 3);
    REQUIRE(c.bandwidth.size() == 2);
    double s = 0.0;
    for (double v : c.split) {
      CHECK(v >= 0.0);
      s += v;
    }
    CHECK(s == Approx(1.0).epsilon(1e-9));
    double b = 0.0;
    for (double v : c.bandwidth) b += v;
    CHECK(b == Approx(1.0).epsilon(1e-9));
  }

  CHECK(greedy_candidates(1, 0.25).size() == 5 * 1);
  CHECK(greedy_candidates(2, 1.0).size() == 3 * 2);
  CHECK_THROWS_AS(greedy_candidates(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(greedy_candidates(2, 1.5), std::invalid_argument);
}

TEST_CASE("greedy scoring matches the documented convention") {
  ScenarioConfig cfg;
  const Observation obs = reference_obs(cfg, 210.0);
  const auto cands = greedy_candidates(cfg.num_rsus, 0.25);
  for (std::size_t c = 0; c < cands.size(); c += 17)
    CHECK(greedy_candidate_score(cands[c], obs, cfg) ==
          Approx(reference_score(cands[c], obs, cfg)).epsilon(1e-12));
}

TEST_CASE("greedy selection is the grid argmin") {
  ScenarioConfig cfg;
  for (const double x : {210.0, 30.0, 480.0}) {
    Observation obs = reference_obs(cfg, x);
    obs.local_backlog = 3e9;
    obs.rsu_backlogs = {1e9, 0.0, 5e9};
    obs.virtual_energy = 50.0;
    const auto cands = greedy_candidates(cfg.num_rsus, 0.25);
    std::size_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cands.size(); ++c) {
      const double s = reference_score(cands[c], obs, cfg);
      if (s < best_score) {
        best_score = s;
        best = c;
      }
    }
    CHECK(greedy_select(cands, obs, cfg) == best);
  }
}

TEST_CASE("ties resolve to the first candidate") {
  ScenarioConfig cfg;
  Observation obs = reference_obs(cfg, 210.0);
  obs.task_bits = 0.0;  // every candidate is free: nothing to move or compute
  obs.instr_bits = 0.0;
  const auto cands = greedy_candidates(cfg.num_rsus, 0.5);
  CHECK(greedy_select(cands, obs, cfg) == 0);
}

TEST_CASE("greedy logits project back onto the chosen cell") {
  ScenarioConfig cfg;
  const Observation obs = reference_obs(cfg, 210.0);
  const auto cands = greedy_candidates(cfg.num_rsus, 0.25);
  const auto& best = cands[greedy_select(cands, obs, cfg)];

  HeuristicPolicy policy{PolicyKind::greedy_grid, 0.25};
  Rng rng(1);
  const RawAction a = heuristic_act(policy, obs, cfg, rng);
  const SplitDecision d = project_action(a, cfg);
  CHECK(d.local_ratio == Approx(best.split[0]).epsilon(1e-9));
  for (int j = 0; j < cfg.num_rsus; ++j) {
    CHECK(d.rsu_ratios[j] == Approx(best.split[j + 1]).epsilon(1e-9));
    CHECK(d.bandwidth[j] == Approx(best.bandwidth[j]).epsilon(1e-9));
    CHECK(d.rsu_cpu_hz[j] == Approx(0.5 * cfg.rsu_usable_hz()).epsilon(1e-12));
  }
}

TEST_CASE("the on-board policy keeps the whole task") {
  ScenarioConfig cfg;
  const Observation obs = reference_obs(cfg, 210.0);
  HeuristicPolicy policy{PolicyKind::all_local, 0.25};
  Rng rng(1);
  const SplitDecision d = project_action(heuristic_act(policy, obs, cfg, rng), cfg);
  CHECK(d.local_ratio >= 0.9999);
  for (double c : d.rsu_cpu_hz) CHECK(c < 1e-4 * cfg.rsu_usable_hz());
}

TEST_CASE("the uniform policy spreads evenly") {
  ScenarioConfig cfg;
  const Observation obs = reference_obs(cfg, 210.0);
  HeuristicPolicy policy{PolicyKind::uniform_split, 0.25};
  Rng rng(1);
  const SplitDecision d = project_action(heuristic_act(policy, obs, cfg, rng), cfg);
  CHECK(d.local_ratio == Approx(0.25).epsilon(1e-12));
  for (double r : d.rsu_ratios) CHECK(r == Approx(0.25).epsilon(1e-12));
  for (double b : d.bandwidth) CHECK(b == Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("the nearest-edge policy picks the closest unit") {
  ScenarioConfig cfg;  // rsus at 200, 350, 500
  HeuristicPolicy policy{PolicyKind::all_edge_nearest, 0.25};
  Rng rng(1);

  const Observation near0 = reference_obs(cfg, 210.0);
  const SplitDecision d0 = project_action(heuristic_act(policy, near0, cfg, rng), cfg);
  CHECK(d0.rsu_ratios[0] > 0.999);
  CHECK(d0.bandwidth[0] > 0.999);
  CHECK(d0.rsu_cpu_hz[0] > 0.999 * cfg.rsu_usable_hz());
  CHECK(d0.local_ratio < 1e-3);

  const Observation near2 = reference_obs(cfg, 480.0);
  const SplitDecision d2 = project_action(heuristic_act(policy, near2, cfg, rng), cfg);
  CHECK(d2.rsu_ratios[2] > 0.999);
  CHECK(d2.bandwidth[2] > 0.999);

  ScenarioConfig pinned = cfg;
  pinned.static_distance = true;  // all units equidistant: first one wins
  const SplitDecision ds = project_action(heuristic_act(policy, near2, pinned, rng), pinned);
  CHECK(ds.rsu_ratios[0] > 0.999);
}

TEST_CASE("the random policy is stream-reproducible") {
  ScenarioConfig cfg;
  const Observation obs = reference_obs(cfg, 210.0);
  HeuristicPolicy policy{PolicyKind::random, 0.25};
  Rng a(99);
  Rng b(99);
  const RawAction ra = heuristic_act(policy, obs, cfg, a);
  const RawAction rb = heuristic_act(policy, obs, cfg, b);
  REQUIRE(ra.logits.size() == rb.logits.size());
  for (std::size_t i = 0; i < ra.logits.size(); ++i) {
    CHECK(ra.logits[i] == rb.logits[i]);
    CHECK(std::isfinite(ra.logits[i]));
  }
  const RawAction rc = heuristic_act(policy, obs, cfg, a);
  CHECK(rc.logits != ra.logits);
}

TEST_CASE("trained policies do not act through the heuristic path") {
  ScenarioConfig cfg;
  const Observation obs = reference_obs(cfg, 210.0);
  HeuristicPolicy policy{PolicyKind::trained, 0.25};
  Rng rng(1);
  CHECK_THROWS_AS(heuristic_act(policy, obs, cfg, rng), std::invalid_argument);
}
