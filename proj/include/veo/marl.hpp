#pragma once

#include <functional>
#include <string>
#include <vector>

#include "veo/env.hpp"
#include "veo/mlp.hpp"

namespace veo {

struct TrainerConfig {
  double learning_rate = 8e-5;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_eps = 0.2;
  int epochs = 10;
  int batch_size = 512;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double grad_clip_norm = 0.5;
  int max_episodes = 1800;
  int episodes_per_update = 5;
  int hidden1 = 64;
  int hidden2 = 64;
  double log_std_init = -0.5;
  bool share_actor_weights = false;

  void validate() const;  // throws ConfigError
};

// Trained networks plus the metadata needed to re-instantiate them.
struct PolicyParams {
  int num_agents = 0;
  int obs_dim = 0;
  int act_dim = 0;
  int hidden1 = 0;
  int hidden2 = 0;
  bool dt_enabled = true;
  bool shared_actor = false;
  std::vector<GaussianPolicy> actors;  // one per agent, or one shared
  Mlp critic;

  const GaussianPolicy& actor_for(int agent) const {
    return actors[shared_actor ? 0 : static_cast<std::size_t>(agent)];
  }

  // Versioned text format with hexfloat payloads (exact round-trip).
  void save(const std::string& path) const;
  static PolicyParams load(const std::string& path);
};

struct EpisodeStats {
  int episode = 0;
  double mean_reward = 0.0;
  double mean_cost = 0.0;
  double mean_delay = 0.0;
  double mean_energy = 0.0;
  double mean_backlog = 0.0;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double entropy = 0.0;
};

using TrainingLog = std::vector<EpisodeStats>;

struct TrainResult {
  PolicyParams params;
  TrainingLog log;
};

// Samples a raw action from an actor given an already-scaled observation.
RawAction policy_act(const GaussianPolicy& actor, std::span<const double> scaled_obs, Rng& rng);

// Accumulates d(ppo_actor_loss)/d(actor params) over a sample batch into
// grad_mlp/grad_logstd and returns the loss value. Advantages arrive already
// normalized; entropy enters once per batch.
double ppo_actor_grad(const GaussianPolicy& actor, std::span<const std::vector<double>> obs,
                      std::span<const std::vector<double>> actions,
                      std::span<const double> logp_old, std::span<const double> advantages,
                      double clip_eps, double entropy_coef, std::span<double> grad_mlp,
                      std::span<double> grad_logstd);

// Accumulates d(value_coef * mse)/d(critic params) and returns the weighted loss.
double critic_grad(const Mlp& critic, std::span<const std::vector<double>> states,
                   std::span<const double> returns, double value_coef, std::span<double> grad);

// On-policy CTDE training: collect episodes, estimate advantages against the
// centralized critic, then run clipped-surrogate epochs. Deterministic for a
// fixed scenario seed. Throws on non-finite losses or parameters.
TrainResult train(const TrainerConfig& tc, const ScenarioConfig& sc, bool dt_enabled,
                  const std::function<void(const EpisodeStats&)>& on_episode = {});

}  // namespace veo
