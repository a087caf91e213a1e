#include "veo/marl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace veo {

void TrainerConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw ConfigError("learning_rate: must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma: must lie in (0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw ConfigError("gae_lambda: must lie in [0, 1]");
  if (!(clip_eps > 0.0 && clip_eps < 1.0)) throw ConfigError("clip_eps: must lie in (0, 1)");
  if (epochs < 1) throw ConfigError("epochs: must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size: must be >= 1");
  if (entropy_coef < 0.0) throw ConfigError("entropy_coef: must be >= 0");
  if (value_coef <= 0.0) throw ConfigError("value_coef: must be > 0");
  if (grad_clip_norm <= 0.0) throw ConfigError("grad_clip_norm: must be > 0");
  if (max_episodes < 1) throw ConfigError("max_episodes: must be >= 1");
  if (episodes_per_update < 1) throw ConfigError("episodes_per_update: must be >= 1");
  if (hidden1 < 1 || hidden2 < 1) throw ConfigError("hidden widths must be >= 1");
}

namespace {

std::string fmt_hex(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

void write_block(std::ostream& out, const std::string& name, std::span<const double> values) {
  out << "block " << name << " " << values.size() << "\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    out << fmt_hex(values[i]) << ((i + 1) % 8 == 0 || i + 1 == values.size() ? "\n" : " ");
}

std::vector<double> read_block(std::istream& in, const std::string& expect) {
  std::string tag, name;
  std::size_t n = 0;
  if (!(in >> tag >> name >> n) || tag != "block" || name != expect)
    throw std::runtime_error("checkpoint: expected block '" + expect + "'");
  std::vector<double> values(n);
  for (auto& v : values) {
    std::string tok;
    if (!(in >> tok)) throw std::runtime_error("checkpoint: truncated block '" + expect + "'");
    char* end = nullptr;
    v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str()) throw std::runtime_error("checkpoint: bad value in '" + expect + "'");
  }
  return values;
}

}  // namespace

void PolicyParams::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << "format veo_policy 1\n";
  out << "num_agents " << num_agents << "\n";
  out << "obs_dim " << obs_dim << "\n";
  out << "act_dim " << act_dim << "\n";
  out << "hidden1 " << hidden1 << "\n";
  out << "hidden2 " << hidden2 << "\n";
  out << "dt_enabled " << (dt_enabled ? 1 : 0) << "\n";
  out << "shared_actor " << (shared_actor ? 1 : 0) << "\n";
  for (std::size_t a = 0; a < actors.size(); ++a) {
    write_block(out, "actor" + std::to_string(a) + "_mean", actors[a].mean.params);
    write_block(out, "actor" + std::to_string(a) + "_logstd", actors[a].log_std);
  }
  write_block(out, "critic", critic.params);
  out << "end\n";
}

PolicyParams PolicyParams::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::string key;
  int version = 0;
  if (!(in >> key >> key >> version) || version != 1)
    throw std::runtime_error("checkpoint: unsupported format: " + path);
  PolicyParams p;
  auto read_kv = [&](const char* name) {
    int v = 0;
    if (!(in >> key >> v) || key != name)
      throw std::runtime_error(std::string("checkpoint: expected ") + name);
    return v;
  };
  p.num_agents = read_kv("num_agents");
  p.obs_dim = read_kv("obs_dim");
  p.act_dim = read_kv("act_dim");
  p.hidden1 = read_kv("hidden1");
  p.hidden2 = read_kv("hidden2");
  p.dt_enabled = read_kv("dt_enabled") != 0;
  p.shared_actor = read_kv("shared_actor") != 0;
  const int actor_count = p.shared_actor ? 1 : p.num_agents;
  for (int a = 0; a < actor_count; ++a) {
    GaussianPolicy actor(p.obs_dim, p.hidden1, p.hidden2, p.act_dim, 0.0);
    auto mean = read_block(in, "actor" + std::to_string(a) + "_mean");
    if (mean.size() != actor.mean.params.size())
      throw std::runtime_error("checkpoint: actor parameter count mismatch");
    actor.mean.params = std::move(mean);
    auto ls = read_block(in, "actor" + std::to_string(a) + "_logstd");
    if (ls.size() != actor.log_std.size())
      throw std::runtime_error("checkpoint: log_std count mismatch");
    actor.log_std = std::move(ls);
    p.actors.push_back(std::move(actor));
  }
  Mlp critic(p.num_agents * p.obs_dim, p.hidden1, p.hidden2, 1);
  auto cp = read_block(in, "critic");
  if (cp.size() != critic.params.size())
    throw std::runtime_error("checkpoint: critic parameter count mismatch");
  critic.params = std::move(cp);
  p.critic = std::move(critic);
  if (!(in >> key) || key != "end") throw std::runtime_error("checkpoint: missing end marker");
  return p;
}

RawAction policy_act(const GaussianPolicy& actor, std::span<const double> scaled_obs, Rng& rng) {
  RawAction a;
  a.logits = actor.sample(scaled_obs, rng).action;
  return a;
}

double ppo_actor_grad(const GaussianPolicy& actor, std::span<const std::vector<double>> obs,
                      std::span<const std::vector<double>> actions,
                      std::span<const double> logp_old, std::span<const double> advantages,
                      double clip_eps, double entropy_coef, std::span<double> grad_mlp,
                      std::span<double> grad_logstd) {
  const std::size_t n = obs.size();
  if (actions.size() != n || logp_old.size() != n || advantages.size() != n)
    throw std::invalid_argument("ppo_actor_grad: batch sizes disagree");
  const double inv_n = 1.0 / static_cast<double>(n);

  Mlp::Cache cache;
  std::vector<double> logp_new(n);
  double objective = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const auto& mean_out = actor.mean.forward(obs[s], cache);
    logp_new[s] = actor.log_prob(mean_out, actions[s]);
    const double ratio = std::exp(logp_new[s] - logp_old[s]);
    const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
    const double s1 = ratio * advantages[s];
    const double s2 = clipped * advantages[s];
    objective += std::min(s1, s2) * inv_n;
    if (s1 <= s2) {
      // Unclipped side active: d(loss)/d(logp) = -A * ratio / n.
      const double coef = -advantages[s] * ratio * inv_n;
      auto dmean = actor.dlogp_dmean(mean_out, actions[s]);
      for (auto& d : dmean) d *= coef;
      actor.mean.backward(cache, dmean, grad_mlp);
      const auto dls = actor.dlogp_dlogstd(mean_out, actions[s]);
      for (std::size_t j = 0; j < dls.size(); ++j) grad_logstd[j] += coef * dls[j];
    }
  }
  // Entropy bonus: H depends only on log_std; one term per batch.
  for (std::size_t j = 0; j < grad_logstd.size(); ++j) grad_logstd[j] -= entropy_coef;
  return -objective - entropy_coef * actor.entropy();
}

double critic_grad(const Mlp& critic, std::span<const std::vector<double>> states,
                   std::span<const double> returns, double value_coef, std::span<double> grad) {
  const std::size_t n = states.size();
  if (returns.size() != n) throw std::invalid_argument("critic_grad: batch sizes disagree");
  Mlp::Cache cache;
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> dy(1);
  for (std::size_t s = 0; s < n; ++s) {
    const auto& out = critic.forward(states[s], cache);
    const double diff = out[0] - returns[s];
    loss += diff * diff * inv_n;
    dy[0] = value_coef * 2.0 * diff * inv_n;
    critic.backward(cache, dy, grad);
  }
  return value_coef * loss;
}

namespace {

struct StepRecord {
  std::vector<std::vector<double>> obs;  // per agent, scaled
  std::vector<double> global;
  std::vector<std::vector<double>> actions;
  std::vector<double> logp;  // per agent
  double value = 0.0;
  double reward_raw = 0.0;
  unsigned char done = 0;
};

void check_finite(double v, const char* what, int update_round) {
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "training diverged: non-finite " << what << " at update round " << update_round;
    throw std::runtime_error(msg.str());
  }
}

}  // namespace

TrainResult train(const TrainerConfig& tc, const ScenarioConfig& sc, bool dt_enabled,
                  const std::function<void(const EpisodeStats&)>& on_episode) {
  tc.validate();
  sc.validate();
  Env env(sc, dt_enabled);
  const int num_agents = env.num_agents();
  const int obs_dim = env.obs_dim();
  const int act_dim = env.action_dim();
  const int actor_count = tc.share_actor_weights ? 1 : num_agents;

  TrainResult result;
  result.params.num_agents = num_agents;
  result.params.obs_dim = obs_dim;
  result.params.act_dim = act_dim;
  result.params.hidden1 = tc.hidden1;
  result.params.hidden2 = tc.hidden2;
  result.params.dt_enabled = dt_enabled;
  result.params.shared_actor = tc.share_actor_weights;
  for (int a = 0; a < actor_count; ++a) {
    GaussianPolicy actor(obs_dim, tc.hidden1, tc.hidden2, act_dim, tc.log_std_init);
    Rng rng(derive_seed(sc.seed, Stream::net_init, static_cast<std::uint64_t>(a)));
    actor.init(rng);
    result.params.actors.push_back(std::move(actor));
  }
  {
    result.params.critic = Mlp(num_agents * obs_dim, tc.hidden1, tc.hidden2, 1);
    Rng rng(derive_seed(sc.seed, Stream::net_init, 1000000));
    result.params.critic.init(rng, 1.0);
  }
  auto& actors = result.params.actors;
  auto& critic = result.params.critic;

  std::vector<AdamState> actor_mlp_opt, actor_ls_opt;
  for (int a = 0; a < actor_count; ++a) {
    actor_mlp_opt.emplace_back(actors[a].mean.params.size());
    actor_ls_opt.emplace_back(actors[a].log_std.size());
  }
  AdamState critic_opt(critic.params.size());

  std::vector<Rng> act_rng;
  for (int i = 0; i < num_agents; ++i)
    act_rng.emplace_back(derive_seed(sc.seed, Stream::policy, static_cast<std::uint64_t>(i)));
  Rng shuffle_rng(derive_seed(sc.seed, Stream::shuffle, 0));

  double reward_scale_est = 1.0;
  double last_actor_loss = 0.0, last_critic_loss = 0.0;
  int update_round = 0;
  int episode = 0;

  while (episode < tc.max_episodes) {
    const int group = std::min(tc.episodes_per_update, tc.max_episodes - episode);
    std::vector<StepRecord> buffer;
    buffer.reserve(static_cast<std::size_t>(group) * sc.slots_per_episode);
    std::vector<EpisodeStats> group_stats;

    for (int e = 0; e < group; ++e) {
      auto obs = env.reset();
      EpisodeStats stats;
      stats.episode = episode + e;
      int slots = 0;
      bool done = false;
      while (!done) {
        StepRecord rec;
        rec.obs.resize(num_agents);
        rec.actions.resize(num_agents);
        rec.logp.resize(num_agents);
        rec.global.reserve(static_cast<std::size_t>(num_agents) * obs_dim);
        for (int i = 0; i < num_agents; ++i) {
          rec.obs[i] = env.scaler().apply(obs[i]);
          rec.global.insert(rec.global.end(), rec.obs[i].begin(), rec.obs[i].end());
        }
        std::vector<RawAction> raw(num_agents);
        for (int i = 0; i < num_agents; ++i) {
          const auto& actor = actors[tc.share_actor_weights ? 0 : i];
          auto s = actor.sample(rec.obs[i], act_rng[i]);
          rec.actions[i] = s.action;
          rec.logp[i] = s.log_prob;
          raw[i].logits = rec.actions[i];
        }
        rec.value = critic.forward(rec.global)[0];
        auto step = env.step(raw);
        rec.reward_raw = step.reward;
        rec.done = step.done ? 1 : 0;
        done = step.done;
        obs = std::move(step.obs);

        stats.mean_reward += step.reward;
        stats.mean_cost += step.outcome.objective.cost;
        double delay = 0.0, energy = 0.0;
        for (const auto& o : step.outcome.outcomes) {
          delay += o.task_latency_s;
          energy += o.task_energy_j;
        }
        stats.mean_delay += delay / num_agents;
        stats.mean_energy += energy / num_agents;
        double backlog = 0.0;
        for (double q : env.queues().local_backlog) backlog += q;
        for (double q : env.queues().rsu_backlog) backlog += q;
        stats.mean_backlog += backlog;
        ++slots;
        buffer.push_back(std::move(rec));
      }
      const double inv = 1.0 / slots;
      stats.mean_reward *= inv;
      stats.mean_cost *= inv;
      stats.mean_delay *= inv;
      stats.mean_energy *= inv;
      stats.mean_backlog *= inv;
      group_stats.push_back(stats);
    }
    episode += group;

    // Normalize rewards by a decaying peak estimate; raw values stay logged.
    double batch_max = 0.0;
    for (const auto& r : buffer) batch_max = std::max(batch_max, std::abs(r.reward_raw));
    reward_scale_est = std::max(batch_max, 0.98 * reward_scale_est);
    const double reward_scale = std::max(reward_scale_est, 1.0);

    const std::size_t n = buffer.size();
    std::vector<double> rewards(n), values(n), advantages(n), returns(n);
    std::vector<unsigned char> dones(n);
    for (std::size_t s = 0; s < n; ++s) {
      rewards[s] = buffer[s].reward_raw / reward_scale;
      values[s] = buffer[s].value;
      dones[s] = buffer[s].done;
    }
    compute_gae(rewards, values, dones, tc.gamma, tc.gae_lambda, advantages, returns);

    double adv_mean = 0.0;
    for (double a : advantages) adv_mean += a;
    adv_mean /= static_cast<double>(n);
    double adv_var = 0.0;
    for (double a : advantages) adv_var += (a - adv_mean) * (a - adv_mean);
    const double adv_std = std::sqrt(adv_var / static_cast<double>(n));
    for (double& a : advantages) a = (a - adv_mean) / (adv_std + 1e-8);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    ++update_round;

    double epoch_actor_loss = 0.0, epoch_critic_loss = 0.0;
    int batches = 0;
    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
      for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[shuffle_rng.below(i)]);
      for (std::size_t start = 0; start < n; start += tc.batch_size) {
        const std::size_t stop = std::min(n, start + tc.batch_size);
        const std::size_t bs = stop - start;

        std::vector<std::vector<double>> states(bs);
        std::vector<double> rets(bs);
        for (std::size_t s = 0; s < bs; ++s) {
          states[s] = buffer[order[start + s]].global;
          rets[s] = returns[order[start + s]];
        }
        std::vector<double> cgrad(critic.params.size(), 0.0);
        const double closs = critic_grad(critic, states, rets, tc.value_coef, cgrad);
        check_finite(closs, "critic loss", update_round);
        clip_grad_norm(cgrad, tc.grad_clip_norm);
        adam_step(critic.params, cgrad, critic_opt, tc.learning_rate);

        double aloss_sum = 0.0;
        for (int a = 0; a < actor_count; ++a) {
          std::vector<std::vector<double>> aobs, aact;
          std::vector<double> alogp, aadv;
          for (std::size_t s = 0; s < bs; ++s) {
            const auto& rec = buffer[order[start + s]];
            for (int i = 0; i < num_agents; ++i) {
              if (!tc.share_actor_weights && i != a) continue;
              aobs.push_back(rec.obs[i]);
              aact.push_back(rec.actions[i]);
              alogp.push_back(rec.logp[i]);
              aadv.push_back(advantages[order[start + s]]);
            }
          }
          std::vector<double> gm(actors[a].mean.params.size(), 0.0);
          std::vector<double> gl(actors[a].log_std.size(), 0.0);
          const double aloss = ppo_actor_grad(actors[a], aobs, aact, alogp, aadv, tc.clip_eps,
                                              tc.entropy_coef, gm, gl);
          check_finite(aloss, "actor loss", update_round);
          aloss_sum += aloss;

          double sq = 0.0;
          for (double g : gm) sq += g * g;
          for (double g : gl) sq += g * g;
          const double norm = std::sqrt(sq);
          if (norm > tc.grad_clip_norm && norm > 0.0) {
            const double scale = tc.grad_clip_norm / norm;
            for (double& g : gm) g *= scale;
            for (double& g : gl) g *= scale;
          }
          adam_step(actors[a].mean.params, gm, actor_mlp_opt[a], tc.learning_rate);
          adam_step(actors[a].log_std, gl, actor_ls_opt[a], tc.learning_rate);
        }
        if (epoch == tc.epochs - 1) {
          epoch_actor_loss += aloss_sum / actor_count;
          epoch_critic_loss += closs;
          ++batches;
        }
      }
    }
    last_actor_loss = batches ? epoch_actor_loss / batches : 0.0;
    last_critic_loss = batches ? epoch_critic_loss / batches : 0.0;
    for (const auto& a : actors) {
      for (double p : a.mean.params) check_finite(p, "actor parameter", update_round);
      for (double p : a.log_std) check_finite(p, "log_std parameter", update_round);
    }
    for (double p : critic.params) check_finite(p, "critic parameter", update_round);

    double ent = 0.0;
    for (const auto& a : actors) ent += a.entropy();
    ent /= actor_count;
    for (auto& stats : group_stats) {
      stats.actor_loss = last_actor_loss;
      stats.critic_loss = last_critic_loss;
      stats.entropy = ent;
      result.log.push_back(stats);
      if (on_episode) on_episode(stats);
    }
  }
  return result;
}

}  // namespace veo
