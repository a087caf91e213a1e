#pragma once

#include <cstdint>

namespace veo {

// Stream purposes for seed derivation. Keeping these stable keeps every
// exogenous draw reproducible and independent of unrelated entities.
enum class Stream : std::uint64_t {
  vehicle = 1,
  task = 2,
  channel = 3,
  policy = 4,
  net_init = 5,
  episode = 6,
  backlog = 7,
  shuffle = 8,
};

std::uint64_t splitmix64(std::uint64_t& state);

// Derives an independent substream seed from (base, purpose, entity).
std::uint64_t derive_seed(std::uint64_t base, Stream purpose, std::uint64_t entity);

// Deterministic generator with explicit, implementation-pinned distributions.
// Distributions are hand-rolled on top of the raw 64-bit stream so that a
// given seed yields the same sequence on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53-bit resolution.
  double unit();
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller; stateless (no cached spare).
  double normal();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t s_[4];
};

}  // namespace veo
