#include "veo/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace veo {

namespace fs = std::filesystem;

void ExperimentPlan::validate() const {
  if (seeds < 1) throw ConfigError("seeds: must be >= 1");
  if (episodes < 0) throw ConfigError("episodes: must be >= 0");
  if (workers < 1) throw ConfigError("workers: must be >= 1");
  if (mode == Mode::sweep) {
    if (sweep_axis != "num_cvs" && sweep_axis != "lyapunov_v" && sweep_axis != "dt_enabled")
      throw ConfigError("sweep_axis: must be num_cvs, lyapunov_v, or dt_enabled");
    if (sweep_values.empty()) throw ConfigError("sweep_values: at least one value required");
  }
  trainer.validate();
  parse_policy(policy);
}

std::string mode_name(ExperimentPlan::Mode mode) {
  switch (mode) {
    case ExperimentPlan::Mode::simulate: return "simulate";
    case ExperimentPlan::Mode::train: return "train";
    case ExperimentPlan::Mode::evaluate: return "evaluate";
    case ExperimentPlan::Mode::sweep: return "sweep";
  }
  return "?";
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw ConfigError(key + ": trailing junk");
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(key + ": cannot parse '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) throw ConfigError(key + ": expected integer");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected on/off");
}

}  // namespace

void plan_set_field(ExperimentPlan& plan, const std::string& key, const std::string& value) {
  if (key == "mode") {
    if (value == "simulate") plan.mode = ExperimentPlan::Mode::simulate;
    else if (value == "train") plan.mode = ExperimentPlan::Mode::train;
    else if (value == "evaluate") plan.mode = ExperimentPlan::Mode::evaluate;
    else if (value == "sweep") plan.mode = ExperimentPlan::Mode::sweep;
    else throw ConfigError("mode: unknown value '" + value + "'");
  } else if (key == "policy") plan.policy = value;
  else if (key == "dt") plan.dt_enabled = to_bool(key, value);
  else if (key == "seed") plan.seed = static_cast<std::uint64_t>(to_double(key, value));
  else if (key == "seeds") plan.seeds = to_int(key, value);
  else if (key == "episodes") plan.episodes = to_int(key, value);
  else if (key == "out") plan.out_dir = value;
  else if (key == "sweep_axis") plan.sweep_axis = value;
  else if (key == "sweep_values") plan.sweep_values = split_list(value);
  else if (key == "workers") plan.workers = to_int(key, value);
  else if (key == "trainer.learning_rate") plan.trainer.learning_rate = to_double(key, value);
  else if (key == "trainer.gamma") plan.trainer.gamma = to_double(key, value);
  else if (key == "trainer.gae_lambda") plan.trainer.gae_lambda = to_double(key, value);
  else if (key == "trainer.clip_eps") plan.trainer.clip_eps = to_double(key, value);
  else if (key == "trainer.epochs") plan.trainer.epochs = to_int(key, value);
  else if (key == "trainer.batch_size") plan.trainer.batch_size = to_int(key, value);
  else if (key == "trainer.entropy_coef") plan.trainer.entropy_coef = to_double(key, value);
  else if (key == "trainer.value_coef") plan.trainer.value_coef = to_double(key, value);
  else if (key == "trainer.grad_clip_norm") plan.trainer.grad_clip_norm = to_double(key, value);
  else if (key == "trainer.max_episodes") plan.trainer.max_episodes = to_int(key, value);
  else if (key == "trainer.episodes_per_update")
    plan.trainer.episodes_per_update = to_int(key, value);
  else if (key == "trainer.hidden1") plan.trainer.hidden1 = to_int(key, value);
  else if (key == "trainer.hidden2") plan.trainer.hidden2 = to_int(key, value);
  else if (key == "trainer.log_std_init") plan.trainer.log_std_init = to_double(key, value);
  else if (key == "trainer.share_actor_weights")
    plan.trainer.share_actor_weights = to_bool(key, value);
  else throw ConfigError("plan: unknown key '" + key + "'");
}

SteadyMetrics steady_metrics(std::span<const double> episode_rewards) {
  if (episode_rewards.size() < 50)
    throw std::invalid_argument("steady_metrics: needs at least 50 episodes");
  const std::size_t n = episode_rewards.size();
  SteadyMetrics m;
  double sum = 0.0;
  for (std::size_t i = n - 50; i < n; ++i) sum += episode_rewards[i];
  m.steady_reward = sum / 50.0;

  double var = 0.0;
  for (std::size_t i = n - 50; i < n; ++i) {
    const double d = episode_rewards[i] - m.steady_reward;
    var += d * d;
  }
  m.coeff_variation =
      m.steady_reward == 0.0 ? 0.0 : std::sqrt(var / 50.0) / std::abs(m.steady_reward);

  const double threshold = m.steady_reward - 0.05 * std::abs(m.steady_reward);
  m.convergence_episode = static_cast<int>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (episode_rewards[i] >= threshold) {
      m.convergence_episode = static_cast<int>(i) + 1;  // episodes count from 1
      break;
    }
  }
  return m;
}

namespace {

const std::vector<std::string> kMetricsHeader = {
    "episode",     "mean_reward", "mean_cost",   "mean_delay", "mean_energy",
    "mean_backlog", "actor_loss",  "critic_loss", "entropy"};

CsvTable metrics_table(const TrainingLog& log) {
  CsvTable t;
  t.header = kMetricsHeader;
  for (const auto& s : log)
    t.rows.push_back({std::to_string(s.episode), format_double(s.mean_reward),
                      format_double(s.mean_cost), format_double(s.mean_delay),
                      format_double(s.mean_energy), format_double(s.mean_backlog),
                      format_double(s.actor_loss), format_double(s.critic_loss),
                      format_double(s.entropy)});
  return t;
}

TrainingLog metrics_from_table(const CsvTable& t) {
  t.require_width(kMetricsHeader.size());
  TrainingLog log;
  for (const auto& r : t.rows) {
    EpisodeStats s;
    s.episode = static_cast<int>(parse_csv_double(r[0]));
    s.mean_reward = parse_csv_double(r[1]);
    s.mean_cost = parse_csv_double(r[2]);
    s.mean_delay = parse_csv_double(r[3]);
    s.mean_energy = parse_csv_double(r[4]);
    s.mean_backlog = parse_csv_double(r[5]);
    s.actor_loss = parse_csv_double(r[6]);
    s.critic_loss = parse_csv_double(r[7]);
    s.entropy = parse_csv_double(r[8]);
    log.push_back(s);
  }
  return log;
}

struct Mean {
  double sum = 0.0;
  long n = 0;
  void add(double v) {
    sum += v;
    ++n;
  }
  double value() const { return n ? sum / n : 0.0; }
};

struct RunAggregate {
  double reward = 0.0, cost = 0.0, delay = 0.0, energy = 0.0, backlog = 0.0;
  int episodes = 0;
};

RunAggregate summarize(const TrainingLog& log) {
  Mean r, c, d, e, b;
  for (const auto& s : log) {
    r.add(s.mean_reward);
    c.add(s.mean_cost);
    d.add(s.mean_delay);
    e.add(s.mean_energy);
    b.add(s.mean_backlog);
  }
  return {r.value(), c.value(), d.value(), e.value(), b.value(),
          static_cast<int>(log.size())};
}

std::pair<double, double> mean_std(std::span<const double> v) {
  if (v.empty()) return {0.0, 0.0};
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - m) * (x - m);
  return {m, std::sqrt(var / static_cast<double>(v.size()))};
}

}  // namespace

CsvTable aggregate_runs(const std::vector<RunRecord>& runs) {
  std::map<std::string, std::vector<const RunRecord*>> by_cell;
  for (const auto& r : runs) by_cell[r.cell].push_back(&r);

  CsvTable t;
  t.header = {"cell",        "seeds",       "episodes",   "reward_mean", "reward_std",
              "cost_mean",   "cost_std",    "delay_mean", "delay_std",   "energy_mean",
              "energy_std",  "backlog_mean", "backlog_std"};
  for (auto& [cell, cell_runs] : by_cell) {
    std::sort(cell_runs.begin(), cell_runs.end(),
              [](const RunRecord* a, const RunRecord* b) { return a->seed < b->seed; });
    std::vector<double> reward, cost, delay, energy, backlog;
    int episodes = 0;
    for (const auto* r : cell_runs) {
      const auto agg = summarize(r->log);
      reward.push_back(agg.reward);
      cost.push_back(agg.cost);
      delay.push_back(agg.delay);
      energy.push_back(agg.energy);
      backlog.push_back(agg.backlog);
      episodes = std::max(episodes, agg.episodes);
    }
    const auto [rm, rs] = mean_std(reward);
    const auto [cm, cs] = mean_std(cost);
    const auto [dm, ds] = mean_std(delay);
    const auto [em, es] = mean_std(energy);
    const auto [bm, bs] = mean_std(backlog);
    t.rows.push_back({cell, std::to_string(cell_runs.size()), std::to_string(episodes),
                      format_double(rm), format_double(rs), format_double(cm), format_double(cs),
                      format_double(dm), format_double(ds), format_double(em), format_double(es),
                      format_double(bm), format_double(bs)});
  }
  return t;
}

TrainingLog run_policy(const ScenarioConfig& cfg, const PolicySpec& policy, bool dt_enabled,
                       int episodes, EpisodeTraces* traces) {
  cfg.validate();
  Env env(cfg, dt_enabled);
  const int num_agents = env.num_agents();
  const int num_rsus = cfg.num_rsus;

  std::optional<PolicyParams> trained;
  if (policy.kind == PolicyKind::trained) {
    trained = PolicyParams::load(policy.checkpoint_path);
    if (trained->num_agents != num_agents || trained->obs_dim != env.obs_dim() ||
        trained->act_dim != env.action_dim())
      throw std::runtime_error("checkpoint dimensions do not match the scenario");
  }
  HeuristicPolicy heuristic{policy.kind, 0.25};

  std::vector<Rng> rng;
  for (int i = 0; i < num_agents; ++i)
    rng.emplace_back(derive_seed(cfg.seed, Stream::policy, static_cast<std::uint64_t>(i)));

  if (traces) {
    traces->episode_trace.header = {"episode", "slot", "agent", "obs_hash", "local_ratio"};
    for (int k = 0; k < num_rsus; ++k)
      traces->episode_trace.header.push_back("rsu_ratio_" + std::to_string(k));
    for (int k = 0; k < num_rsus; ++k)
      traces->episode_trace.header.push_back("bandwidth_" + std::to_string(k));
    for (int k = 0; k < num_rsus; ++k)
      traces->episode_trace.header.push_back("cpu_hz_" + std::to_string(k));
    traces->episode_trace.header.insert(traces->episode_trace.header.end(),
                                        {"reward", "latency_s", "energy_j", "feasible",
                                         "deadline_met"});
    traces->queue_trace.header = {"episode", "slot", "queue_id", "backlog", "arrival",
                                  "delay_estimate"};
    traces->objective_trace.header = {"episode", "slot", "cost", "p2", "reward",
                                      "drift", "bound_b", "lyapunov"};
  }

  TrainingLog log;
  for (int ep = 0; ep < episodes; ++ep) {
    auto obs = env.reset();
    EpisodeStats stats;
    stats.episode = ep;
    int slots = 0;
    bool done = false;
    while (!done) {
      std::vector<RawAction> actions(num_agents);
      for (int i = 0; i < num_agents; ++i) {
        if (trained)
          actions[i] = policy_act(trained->actor_for(i), env.scaler().apply(obs[i]), rng[i]);
        else
          actions[i] = heuristic_act(heuristic, obs[i], cfg, rng[i]);
      }
      std::vector<std::string> hashes(num_agents);
      if (traces)
        for (int i = 0; i < num_agents; ++i) {
          const auto flat = obs[i].flat();
          hashes[i] = fnv1a_hex(flat.data(), flat.size() * sizeof(double));
        }
      auto step = env.step(actions);
      const auto& rec = step.outcome;

      stats.mean_reward += step.reward;
      stats.mean_cost += rec.objective.cost;
      double delay = 0.0, energy = 0.0;
      for (const auto& o : rec.outcomes) {
        delay += o.task_latency_s;
        energy += o.task_energy_j;
      }
      stats.mean_delay += delay / num_agents;
      stats.mean_energy += energy / num_agents;
      double backlog = 0.0;
      for (double q : env.queues().local_backlog) backlog += q;
      for (double q : env.queues().rsu_backlog) backlog += q;
      stats.mean_backlog += backlog;

      if (traces) {
        for (int i = 0; i < num_agents; ++i) {
          std::vector<std::string> row = {std::to_string(ep), std::to_string(rec.slot),
                                          std::to_string(i), hashes[i],
                                          format_double(rec.actions[i].local_ratio)};
          for (int k = 0; k < num_rsus; ++k)
            row.push_back(format_double(rec.actions[i].rsu_ratios[k]));
          for (int k = 0; k < num_rsus; ++k)
            row.push_back(format_double(rec.actions[i].bandwidth[k]));
          for (int k = 0; k < num_rsus; ++k)
            row.push_back(format_double(rec.actions[i].rsu_cpu_hz[k]));
          row.push_back(format_double(step.reward));
          row.push_back(format_double(rec.outcomes[i].task_latency_s));
          row.push_back(format_double(rec.outcomes[i].task_energy_j));
          row.push_back(rec.outcomes[i].feasible ? "1" : "0");
          row.push_back(rec.outcomes[i].deadline_met ? "1" : "0");
          traces->episode_trace.rows.push_back(std::move(row));
        }
        const auto& z = env.queues();
        for (int i = 0; i < num_agents; ++i)
          traces->queue_trace.rows.push_back(
              {std::to_string(ep), std::to_string(rec.slot), "cv" + std::to_string(i) + "_local",
               format_double(z.local_backlog[i]),
               format_double(rec.flows.local_arrival_cycles[i]),
               format_double(little_delay(z.local_hist[i]))});
        for (int k = 0; k < num_rsus; ++k)
          traces->queue_trace.rows.push_back(
              {std::to_string(ep), std::to_string(rec.slot), "rsu" + std::to_string(k),
               format_double(z.rsu_backlog[k]), format_double(rec.flows.rsu_arrival_cycles[k]),
               format_double(little_delay(z.rsu_hist[k]))});
        traces->queue_trace.rows.push_back({std::to_string(ep), std::to_string(rec.slot),
                                            "virtual", format_double(z.virtual_energy),
                                            format_double(rec.flows.e_total_j), "0"});
        traces->objective_trace.rows.push_back(
            {std::to_string(ep), std::to_string(rec.slot), format_double(rec.objective.cost),
             format_double(rec.objective.p2_value), format_double(rec.objective.reward),
             format_double(rec.objective.drift_sum()),
             format_double(rec.objective.bound_constant_b),
             format_double(rec.objective.lyapunov_value)});
      }

      done = step.done;
      obs = std::move(step.obs);
      ++slots;
    }
    const double inv = 1.0 / slots;
    stats.mean_reward *= inv;
    stats.mean_cost *= inv;
    stats.mean_delay *= inv;
    stats.mean_energy *= inv;
    stats.mean_backlog *= inv;
    log.push_back(stats);
  }
  return log;
}

namespace {

struct Cell {
  std::string name;
  ScenarioConfig cfg;
  bool dt_enabled = true;
};

std::vector<Cell> plan_cells(const ExperimentPlan& plan, const ScenarioConfig& base) {
  std::vector<Cell> cells;
  if (plan.mode != ExperimentPlan::Mode::sweep) {
    cells.push_back({"main", base, plan.dt_enabled});
    return cells;
  }
  for (const auto& value : plan.sweep_values) {
    Cell cell{plan.sweep_axis + "=" + value, base, plan.dt_enabled};
    if (plan.sweep_axis == "num_cvs") cell.cfg.num_cvs = to_int("num_cvs", value);
    else if (plan.sweep_axis == "lyapunov_v") cell.cfg.lyapunov_v = to_double("lyapunov_v", value);
    else cell.dt_enabled = to_bool("dt_enabled", value);
    cell.cfg.validate();
    cells.push_back(std::move(cell));
  }
  return cells;
}

void emit_xy(const fs::path& path, const std::string& x_name,
             const std::vector<std::array<double, 3>>& pts) {
  CsvTable t;
  t.header = {x_name, "y", "yerr"};
  for (const auto& p : pts)
    t.rows.push_back({format_double(p[0]), format_double(p[1]), format_double(p[2])});
  write_csv(path.string(), t);
}

std::string unique_out_dir(const std::string& mode) {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch());
  std::string base = "veo_" + mode + "_" + std::to_string(secs.count());
  std::string name = base;
  int counter = 0;
  while (fs::exists(name)) name = base + "_" + std::to_string(++counter);
  return name;
}

}  // namespace

std::string run_plan(const ExperimentPlan& plan, const ScenarioConfig& cfg) {
  plan.validate();
  cfg.validate();
  const PolicySpec policy = parse_policy(plan.policy);

  const fs::path out =
      plan.out_dir.empty() ? fs::path(unique_out_dir(mode_name(plan.mode))) : fs::path(plan.out_dir);
  fs::create_directories(out);
  save_config(cfg, (out / "config.cfg").string());
  {
    std::ofstream pf(out / "plan.txt", std::ios::binary);
    pf << "mode = " << mode_name(plan.mode) << "\n"
       << "policy = " << plan.policy << "\n"
       << "dt = " << (plan.dt_enabled ? "on" : "off") << "\n"
       << "seed = " << plan.seed << "\n"
       << "seeds = " << plan.seeds << "\n"
       << "episodes = " << plan.episodes << "\n"
       << "sweep_axis = " << plan.sweep_axis << "\n"
       << "workers = " << plan.workers << "\n";
  }

  std::set<std::string> completed;
  const fs::path manifest_path = out / "manifest.txt";
  if (fs::exists(manifest_path)) {
    std::ifstream mf(manifest_path);
    std::string line;
    while (std::getline(mf, line))
      if (!line.empty()) completed.insert(line);
  }
  std::mutex manifest_mutex;

  const auto cells = plan_cells(plan, cfg);
  const bool is_train = plan.mode == ExperimentPlan::Mode::train;
  const bool wants_traces = plan.mode == ExperimentPlan::Mode::simulate ||
                            plan.mode == ExperimentPlan::Mode::evaluate;
  const int episodes = plan.episodes > 0 ? plan.episodes
                       : is_train        ? plan.trainer.max_episodes
                                         : 10;

  struct Unit {
    const Cell* cell;
    int seed_index;
  };
  std::vector<Unit> units;
  for (const auto& cell : cells)
    for (int r = 0; r < plan.seeds; ++r) units.push_back({&cell, r});

  auto run_unit = [&](const Unit& unit) {
    const std::string tag = unit.cell->name + "/seed" + std::to_string(unit.seed_index);
    const fs::path dir = out / "cells" / unit.cell->name / ("seed" + std::to_string(unit.seed_index));
    {
      std::lock_guard<std::mutex> lock(manifest_mutex);
      if (completed.count(tag)) return;
    }
    fs::create_directories(dir);
    ScenarioConfig run_cfg = unit.cell->cfg;
    run_cfg.seed = plan.seed + static_cast<std::uint64_t>(unit.seed_index);

    TrainingLog log;
    if (is_train) {
      TrainerConfig tc = plan.trainer;
      tc.max_episodes = episodes;
      auto result = train(tc, run_cfg, unit.cell->dt_enabled);
      log = std::move(result.log);
      result.params.save((dir / "checkpoint.txt").string());
      if (log.size() >= 50) {
        std::vector<double> rewards;
        for (const auto& s : log) rewards.push_back(s.mean_reward);
        const auto sm = steady_metrics(rewards);
        CsvTable t;
        t.header = {"steady_reward", "coeff_variation", "convergence_episode"};
        t.rows.push_back({format_double(sm.steady_reward), format_double(sm.coeff_variation),
                          std::to_string(sm.convergence_episode)});
        write_csv((dir / "steady.csv").string(), t);
      }
    } else {
      EpisodeTraces traces;
      log = run_policy(run_cfg, policy, unit.cell->dt_enabled, episodes,
                       wants_traces ? &traces : nullptr);
      if (wants_traces) {
        write_csv((dir / "episode_trace.csv").string(), traces.episode_trace);
        write_csv((dir / "queue_trace.csv").string(), traces.queue_trace);
        write_csv((dir / "objective_trace.csv").string(), traces.objective_trace);
      }
    }
    write_csv((dir / "metrics.csv").string(), metrics_table(log));
    {
      std::lock_guard<std::mutex> lock(manifest_mutex);
      std::ofstream mf(manifest_path, std::ios::app | std::ios::binary);
      mf << tag << "\n";
      completed.insert(tag);
    }
  };

  if (plan.workers <= 1) {
    for (const auto& unit : units) run_unit(unit);
  } else {
    std::vector<std::future<void>> inflight;
    for (const auto& unit : units) {
      if (static_cast<int>(inflight.size()) >= plan.workers) {
        inflight.front().get();
        inflight.erase(inflight.begin());
      }
      inflight.push_back(std::async(std::launch::async, run_unit, std::cref(unit)));
    }
    for (auto& f : inflight) f.get();
  }

  // Aggregate from disk so resumed and fresh cells are treated alike.
  std::vector<RunRecord> records;
  for (const auto& cell : cells) {
    for (int r = 0; r < plan.seeds; ++r) {
      const fs::path dir = out / "cells" / cell.name / ("seed" + std::to_string(r));
      RunRecord rec;
      rec.cell = cell.name;
      rec.seed = plan.seed + static_cast<std::uint64_t>(r);
      rec.log = metrics_from_table(read_csv((dir / "metrics.csv").string()));
      records.push_back(std::move(rec));
    }
  }
  write_csv((out / "summary.csv").string(), aggregate_runs(records));

  // Plot data. Reward curves apply to every mode; sweep modes add axis plots.
  if (plan.mode != ExperimentPlan::Mode::sweep) {
    const int n_eps = static_cast<int>(records.front().log.size());
    std::vector<std::array<double, 3>> pts;
    for (int e = 0; e < n_eps; ++e) {
      std::vector<double> vals;
      for (const auto& rec : records)
        if (e < static_cast<int>(rec.log.size())) vals.push_back(rec.log[e].mean_reward);
      const auto [m, s] = mean_std(vals);
      pts.push_back({static_cast<double>(e), m, s});
    }
    emit_xy(out / "plot_reward_vs_episode.csv", "episode", pts);

    if (wants_traces) {
      // Per-CV mean backlog per episode, averaged over seeds.
      const int num_cvs = cells.front().cfg.num_cvs;
      for (int i = 0; i < num_cvs; ++i) {
        std::map<int, std::vector<double>> per_episode;  // episode -> per-seed means
        for (int r = 0; r < plan.seeds; ++r) {
          const fs::path dir = out / "cells" / cells.front().name / ("seed" + std::to_string(r));
          const CsvTable qt = read_csv((dir / "queue_trace.csv").string());
          std::map<int, Mean> acc;
          const std::string qid = "cv" + std::to_string(i) + "_local";
          for (const auto& row : qt.rows)
            if (row[2] == qid)
              acc[static_cast<int>(parse_csv_double(row[0]))].add(parse_csv_double(row[3]));
          for (const auto& [ep, mean] : acc) per_episode[ep].push_back(mean.value());
        }
        std::vector<std::array<double, 3>> qpts;
        for (const auto& [ep, vals] : per_episode) {
          const auto [m, s] = mean_std(vals);
          qpts.push_back({static_cast<double>(ep), m, s});
        }
        emit_xy(out / ("plot_queue_cv" + std::to_string(i) + "_vs_episode.csv"), "episode", qpts);
      }
    }
  } else {
    const CsvTable summary = aggregate_runs(records);
    auto axis_value = [&](const std::string& cell) {
      return cell.substr(cell.find('=') + 1);
    };
    if (plan.sweep_axis == "num_cvs" || plan.sweep_axis == "lyapunov_v") {
      const std::string x = plan.sweep_axis == "num_cvs" ? "num_cvs" : "lyapunov_v";
      auto column_plot = [&](int mean_col, int std_col, const std::string& name) {
        std::vector<std::array<double, 3>> pts;
        for (const auto& value : plan.sweep_values) {
          for (const auto& row : summary.rows)
            if (axis_value(row[0]) == value && row[0].rfind(plan.sweep_axis + "=", 0) == 0)
              pts.push_back({to_double(x, value), parse_csv_double(row[mean_col]),
                             parse_csv_double(row[std_col])});
        }
        emit_xy(out / name, x, pts);
      };
      if (plan.sweep_axis == "num_cvs") {
        column_plot(5, 6, "plot_cost_vs_num_cvs.csv");
        column_plot(7, 8, "plot_delay_vs_num_cvs.csv");
        column_plot(9, 10, "plot_energy_vs_num_cvs.csv");
      } else {
        column_plot(5, 6, "plot_cost_vs_v.csv");
        column_plot(11, 12, "plot_backlog_vs_v.csv");
      }
    } else {
      for (const auto& cell : cells) {
        std::vector<std::array<double, 3>> pts;
        const int n_eps =
            static_cast<int>(records.front().log.size());
        for (int e = 0; e < n_eps; ++e) {
          std::vector<double> vals;
          for (const auto& rec : records)
            if (rec.cell == cell.name && e < static_cast<int>(rec.log.size()))
              vals.push_back(rec.log[e].mean_reward);
          const auto [m, s] = mean_std(vals);
          pts.push_back({static_cast<double>(e), m, s});
        }
        std::string suffix = cell.name;
        for (auto& c : suffix)
          if (c == '=') c = '_';
        emit_xy(out / ("plot_reward_vs_episode_" + suffix + ".csv"), "episode", pts);
      }
    }
  }
  return out.string();
}

}  // namespace veo
