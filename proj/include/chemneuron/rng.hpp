#pragma once

#include <cstdint>

namespace chemneuron {

/// SplitMix64. Used to expand a single seed word into generator state and
/// to derive independent stream seeds.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

/// xoshiro256** (Blackman & Vigna). Hand-rolled so that trajectories are
/// bit-reproducible across platforms and standard-library versions.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform double in (0, 1]; never returns 0, safe to feed into log().
  double uniform01();

  /// Exponential waiting time with the given rate (rate > 0).
  double exponential(double rate);

  /// Normal variate via Marsaglia's polar method.
  double normal(double mean, double stddev);

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Seed for stream `index` of an ensemble keyed by `master`. Streams are
/// stable regardless of execution order, so sweeps can be parallelized or
/// resumed without changing results.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace chemneuron
