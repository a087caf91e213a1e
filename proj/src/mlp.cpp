#include "veo/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace veo {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

void affine(std::span<const double> w, std::span<const double> b, std::span<const double> x,
            std::span<double> y) {
  const std::size_t rows = b.size(), cols = x.size();
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = b[r];
    const double* wr = w.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}
}  // namespace

Mlp::Mlp(int in, int hidden1, int hidden2, int out) : in_(in), h1_(hidden1), h2_(hidden2), out_(out) {
  params.assign(param_count(in, hidden1, hidden2, out), 0.0);
}

int Mlp::param_count(int in, int hidden1, int hidden2, int out) {
  return hidden1 * in + hidden1 + hidden2 * hidden1 + hidden2 + out * hidden2 + out;
}

void Mlp::init(Rng& rng, double head_gain) {
  auto fill = [&](std::size_t offset, int rows, int cols, double gain) {
    const double std = gain * std::sqrt(2.0 / cols);
    for (int i = 0; i < rows * cols; ++i) params[offset + i] = std * rng.normal();
  };
  std::size_t off = 0;
  fill(off, h1_, in_, 1.0);
  off += static_cast<std::size_t>(h1_) * in_ + h1_;  // biases stay zero
  fill(off, h2_, h1_, 1.0);
  off += static_cast<std::size_t>(h2_) * h1_ + h2_;
  fill(off, out_, h2_, head_gain);
}

const std::vector<double>& Mlp::forward(std::span<const double> x, Cache& cache) const {
  if (static_cast<int>(x.size()) != in_) throw std::invalid_argument("mlp: input dim mismatch");
  cache.x.assign(x.begin(), x.end());
  cache.z1.resize(h1_);
  cache.a1.resize(h1_);
  cache.z2.resize(h2_);
  cache.a2.resize(h2_);
  cache.y.resize(out_);

  const double* p = params.data();
  const std::span w1(p, static_cast<std::size_t>(h1_) * in_);
  const std::span b1(p + w1.size(), static_cast<std::size_t>(h1_));
  const std::span w2(b1.data() + h1_, static_cast<std::size_t>(h2_) * h1_);
  const std::span b2(w2.data() + w2.size(), static_cast<std::size_t>(h2_));
  const std::span w3(b2.data() + h2_, static_cast<std::size_t>(out_) * h2_);
  const std::span b3(w3.data() + w3.size(), static_cast<std::size_t>(out_));

  affine(w1, b1, cache.x, cache.z1);
  for (int i = 0; i < h1_; ++i) cache.a1[i] = std::max(cache.z1[i], 0.0);
  affine(w2, b2, cache.a1, cache.z2);
  for (int i = 0; i < h2_; ++i) cache.a2[i] = std::max(cache.z2[i], 0.0);
  affine(w3, b3, cache.a2, cache.y);
  return cache.y;
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
  Cache cache;
  forward(x, cache);
  return cache.y;
}

void Mlp::backward(const Cache& cache, std::span<const double> dy, std::span<double> grad) const {
  if (static_cast<int>(dy.size()) != out_ || grad.size() != params.size())
    throw std::invalid_argument("mlp: gradient dim mismatch");

  const std::size_t w1n = static_cast<std::size_t>(h1_) * in_;
  const std::size_t w2n = static_cast<std::size_t>(h2_) * h1_;
  const std::size_t w3n = static_cast<std::size_t>(out_) * h2_;
  const std::size_t ow1 = 0, ob1 = w1n, ow2 = ob1 + h1_, ob2 = ow2 + w2n, ow3 = ob2 + h2_,
                    ob3 = ow3 + w3n;

  std::vector<double> dz2(h2_, 0.0), dz1(h1_, 0.0);

  for (int r = 0; r < out_; ++r) {
    grad[ob3 + r] += dy[r];
    for (int c = 0; c < h2_; ++c) grad[ow3 + static_cast<std::size_t>(r) * h2_ + c] += dy[r] * cache.a2[c];
  }
  for (int c = 0; c < h2_; ++c) {
    if (cache.z2[c] <= 0.0) continue;
    double acc = 0.0;
    for (int r = 0; r < out_; ++r) acc += params[ow3 + static_cast<std::size_t>(r) * h2_ + c] * dy[r];
    dz2[c] = acc;
  }
  for (int r = 0; r < h2_; ++r) {
    if (dz2[r] == 0.0) continue;
    grad[ob2 + r] += dz2[r];
    for (int c = 0; c < h1_; ++c) grad[ow2 + static_cast<std::size_t>(r) * h1_ + c] += dz2[r] * cache.a1[c];
  }
  for (int c = 0; c < h1_; ++c) {
    if (cache.z1[c] <= 0.0) continue;
    double acc = 0.0;
    for (int r = 0; r < h2_; ++r) acc += params[ow2 + static_cast<std::size_t>(r) * h1_ + c] * dz2[r];
    dz1[c] = acc;
  }
  for (int r = 0; r < h1_; ++r) {
    if (dz1[r] == 0.0) continue;
    grad[ob1 + r] += dz1[r];
    for (int c = 0; c < in_; ++c) grad[ow1 + static_cast<std::size_t>(r) * in_ + c] += dz1[r] * cache.x[c];
  }
}

GaussianPolicy::GaussianPolicy(int obs_dim, int hidden1, int hidden2, int act_dim,
                               double log_std_init)
    : mean(obs_dim, hidden1, hidden2, act_dim), log_std(act_dim, log_std_init) {}

void GaussianPolicy::init(Rng& rng) {
  // Small head gain keeps early behavior near the uniform split.
  mean.init(rng, 0.01);
}

GaussianPolicy::Sample GaussianPolicy::sample(std::span<const double> obs, Rng& rng) const {
  Sample s;
  s.action = mean.forward(obs);
  for (int j = 0; j < act_dim(); ++j) {
    const double mu = s.action[j];
    const double sigma = std::exp(log_std[j]);
    const double a = mu + sigma * rng.normal();
    s.action[j] = a;
    const double z = (a - mu) / sigma;
    s.log_prob += -log_std[j] - 0.5 * kLog2Pi - 0.5 * z * z;
  }
  return s;
}

double GaussianPolicy::log_prob(std::span<const double> mean_out,
                                std::span<const double> action) const {
  double lp = 0.0;
  for (int j = 0; j < act_dim(); ++j) {
    const double z = (action[j] - mean_out[j]) / std::exp(log_std[j]);
    lp += -log_std[j] - 0.5 * kLog2Pi - 0.5 * z * z;
  }
  return lp;
}

double GaussianPolicy::entropy() const {
  double h = 0.0;
  for (double ls : log_std) h += ls + 0.5 * (kLog2Pi + 1.0);
  return h;
}

std::vector<double> GaussianPolicy::dlogp_dmean(std::span<const double> mean_out,
                                                std::span<const double> action) const {
  std::vector<double> d(act_dim());
  for (int j = 0; j < act_dim(); ++j) {
    const double var = std::exp(2.0 * log_std[j]);
    d[j] = (action[j] - mean_out[j]) / var;
  }
  return d;
}

std::vector<double> GaussianPolicy::dlogp_dlogstd(std::span<const double> mean_out,
                                                  std::span<const double> action) const {
  std::vector<double> d(act_dim());
  for (int j = 0; j < act_dim(); ++j) {
    const double z = (action[j] - mean_out[j]) / std::exp(log_std[j]);
    d[j] = z * z - 1.0;
  }
  return d;
}

void adam_step(std::span<double> params, std::span<const double> grad, AdamState& state,
               double lr, double beta1, double beta2, double eps) {
  if (params.size() != grad.size() || params.size() != state.m.size())
    throw std::invalid_argument("adam: size mismatch");
  ++state.t;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grad[i];
    state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grad[i] * grad[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

double clip_grad_norm(std::span<double> grad, double max_norm) {
  double sq = 0.0;
  for (double g : grad) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (double& g : grad) g *= scale;
  }
  return norm;
}

void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const unsigned char> dones, double gamma, double lambda,
                 std::span<double> advantages, std::span<double> returns) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n || advantages.size() != n || returns.size() != n)
    throw std::invalid_argument("gae: sequence lengths disagree");
  double adv = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double not_done = dones[t] ? 0.0 : 1.0;
    const double next_value = (t + 1 < n) ? values[t + 1] : 0.0;
    const double delta = rewards[t] + gamma * next_value * not_done - values[t];
    adv = delta + gamma * lambda * not_done * adv;
    advantages[t] = adv;
    returns[t] = adv + values[t];
  }
}

double ppo_objective(std::span<const double> log_probs_new, std::span<const double> log_probs_old,
                     std::span<const double> advantages, double clip_eps) {
  const std::size_t n = log_probs_new.size();
  if (log_probs_old.size() != n || advantages.size() != n)
    throw std::invalid_argument("ppo: batch lengths disagree");
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ratio = std::exp(log_probs_new[i] - log_probs_old[i]);
    const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
    acc += std::min(ratio * advantages[i], clipped * advantages[i]);
  }
  return acc / static_cast<double>(n);
}

double ppo_actor_loss(std::span<const double> log_probs_new, std::span<const double> log_probs_old,
                      std::span<const double> advantages, double clip_eps, double entropy,
                      double entropy_coef) {
  return -ppo_objective(log_probs_new, log_probs_old, advantages, clip_eps) -
         entropy_coef * entropy;
}

double critic_loss(std::span<const double> values_pred, std::span<const double> returns) {
  if (values_pred.size() != returns.size()) throw std::invalid_argument("critic: batch mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < values_pred.size(); ++i) {
    const double d = values_pred[i] - returns[i];
    acc += d * d;
  }
  return acc / static_cast<double>(values_pred.size());
}

}  // namespace veo
