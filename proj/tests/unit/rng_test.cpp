#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"

#include "chemneuron/rng.hpp"

using namespace chemneuron;

TEST_CASE("splitmix64 matches the reference sequence") {
  // First three outputs of the reference implementation for seed 0.
  SplitMix64 sm(0);
  CHECK(sm.next() == 0xE220A8397B1DCDAFULL);
  CHECK(sm.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(sm.next() == 0x06C45D188009454FULL);
}

TEST_CASE("generators are deterministic per seed") {
  Xoshiro256 a(42);
  Xoshiro256 b(42);
  Xoshiro256 c(43);
  bool all_equal = true;
  bool any_differ = false;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t va = a.next();
    all_equal = all_equal && (va == b.next());
    any_differ = any_differ || (va != c.next());
  }
  CHECK(all_equal);
  CHECK(any_differ);
}

TEST_CASE("uniform01 stays in (0, 1] with the right mean") {
  Xoshiro256 rng(7);
  const int n = 200000;
  double sum = 0.0;
  double min_seen = 1.0;
  double max_seen = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    min_seen = std::min(min_seen, u);
    max_seen = std::max(max_seen, u);
    sum += u;
  }
  CHECK(min_seen > 0.0);
  CHECK(max_seen <= 1.0);
  const double se = 1.0 / std::sqrt(12.0 * n);
  CHECK(std::abs(sum / n - 0.5) < 3 * se);
}

TEST_CASE("exponential and normal have the right moments") {
  Xoshiro256 rng(11);
  const int n = 200000;

  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.exponential(4.0);
  const double exp_mean = sum / n;
  const double exp_se = 0.25 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(exp_mean - 0.25) < 3 * exp_se);

  double s1 = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal(3.0, 2.0);
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::abs(mean - 3.0) < 3 * 2.0 / std::sqrt(static_cast<double>(n)));
  // var estimator SE ~ sigma^2 sqrt(2/n)
  CHECK(std::abs(var - 4.0) < 3 * 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("derived stream seeds do not collide") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t master : {0ULL, 1ULL, 0xDEADBEEFULL}) {
    for (std::uint64_t i = 0; i < 1000; ++i) {
      seen.insert(derive_seed(master, i));
    }
  }
  CHECK(seen.size() == 3000);
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
  CHECK(derive_seed(1, 5) != derive_seed(2, 5));
}
