#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "veo/rng.hpp"

using namespace veo;

TEST_CASE("same seed reproduces the full stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(42), d(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(c.unit() == d.unit());
    CHECK(c.normal() == d.normal());
  }
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++equal;
  CHECK(equal == 0);
}

TEST_CASE("derive_seed separates streams and entities") {
  std::set<std::uint64_t> seen;
  for (auto purpose : {Stream::vehicle, Stream::task, Stream::channel, Stream::policy,
                       Stream::net_init, Stream::episode, Stream::backlog, Stream::shuffle})
    for (std::uint64_t entity = 0; entity < 16; ++entity)
      seen.insert(derive_seed(7, purpose, entity));
  CHECK(seen.size() == 8 * 16);
  CHECK(derive_seed(7, Stream::task, 3) == derive_seed(7, Stream::task, 3));
  CHECK(derive_seed(7, Stream::task, 3) != derive_seed(8, Stream::task, 3));
}

TEST_CASE("unit stays in [0, 1)") {
  Rng rng(9);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform respects the interval") {
  Rng rng(11);
  double lo = 1e9, hi = -1e9;
  for (int i = 0; i < 100000; ++i) {
    const double v = rng.uniform(12.0, 16.0);
    CHECK(v >= 12.0);
    CHECK(v <= 16.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo < 12.1);
  CHECK(hi > 15.9);
}

TEST_CASE("normal has standard moments") {
  Rng rng(13);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("below covers the range without bias artifacts") {
  Rng rng(17);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const std::uint64_t v = rng.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int c : counts) {
    CHECK(c > 9000);
    CHECK(c < 11000);
  }
}

TEST_CASE("splitmix64 advances its state") {
  std::uint64_t s = 123;
  const auto a = splitmix64(s);
  const auto b = splitmix64(s);
  CHECK(a != b);
  CHECK(s != 123);
}
