#pragma once

#include <span>
#include <vector>

#include "veo/rng.hpp"

namespace veo {

// Dense net with two rectified hidden layers and a linear head. Parameters
// live in one flat vector ordered [W1, b1, W2, b2, W3, b3], weights row-major.
class Mlp {
 public:
  Mlp() = default;
  Mlp(int in, int hidden1, int hidden2, int out);

  static int param_count(int in, int hidden1, int hidden2, int out);
  int param_count() const { return static_cast<int>(params.size()); }
  int input_dim() const { return in_; }
  int output_dim() const { return out_; }
  int hidden1() const { return h1_; }
  int hidden2() const { return h2_; }

  // He-normal weights, zero biases; the head layer is scaled by head_gain.
  void init(Rng& rng, double head_gain = 1.0);

  struct Cache {
    std::vector<double> x, z1, a1, z2, a2, y;
  };

  std::vector<double> forward(std::span<const double> x) const;
  const std::vector<double>& forward(std::span<const double> x, Cache& cache) const;

  // Accumulates d(loss)/d(params) into grad for upstream gradient dy.
  void backward(const Cache& cache, std::span<const double> dy, std::span<double> grad) const;

  std::vector<double> params;

 private:
  int in_ = 0, h1_ = 0, h2_ = 0, out_ = 0;
};

// Diagonal Gaussian over actions; the mean comes from an Mlp, the log-stds
// are free state-independent parameters.
struct GaussianPolicy {
  Mlp mean;
  std::vector<double> log_std;

  GaussianPolicy() = default;
  GaussianPolicy(int obs_dim, int hidden1, int hidden2, int act_dim, double log_std_init);

  int act_dim() const { return static_cast<int>(log_std.size()); }
  int param_count() const { return mean.param_count() + act_dim(); }

  void init(Rng& rng);

  struct Sample {
    std::vector<double> action;
    double log_prob = 0.0;
  };
  Sample sample(std::span<const double> obs, Rng& rng) const;
  double log_prob(std::span<const double> mean_out, std::span<const double> action) const;
  double entropy() const;

  // d(log_prob)/d(mean output) for a fixed action, used by the surrogate.
  std::vector<double> dlogp_dmean(std::span<const double> mean_out,
                                  std::span<const double> action) const;
  // d(log_prob)/d(log_std), elementwise.
  std::vector<double> dlogp_dlogstd(std::span<const double> mean_out,
                                    std::span<const double> action) const;
};

struct AdamState {
  std::vector<double> m, v;
  long t = 0;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state,
               double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

// Scales grad in place when its L2 norm exceeds max_norm; returns the norm.
double clip_grad_norm(std::span<double> grad, double max_norm);

// Exponentially weighted advantage estimates and value targets.
void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const unsigned char> dones, double gamma, double lambda,
                 std::span<double> advantages, std::span<double> returns);

// Mean clipped-surrogate objective (to be maximized).
double ppo_objective(std::span<const double> log_probs_new, std::span<const double> log_probs_old,
                     std::span<const double> advantages, double clip_eps);
// Loss form: negated objective minus the entropy bonus.
double ppo_actor_loss(std::span<const double> log_probs_new, std::span<const double> log_probs_old,
                      std::span<const double> advantages, double clip_eps, double entropy,
                      double entropy_coef);
double critic_loss(std::span<const double> values_pred, std::span<const double> returns);

}  // namespace veo
