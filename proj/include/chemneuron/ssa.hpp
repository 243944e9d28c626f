#pragma once

#include <cstdint>

#include "chemneuron/network.hpp"
#include "chemneuron/schedule.hpp"
#include "chemneuron/trajectory.hpp"

namespace chemneuron {

struct SsaOptions {
  /// Sampling stride for the recorder; samples land on k*stride plus one
  /// final sample at t_end.
  double stride = 1e-3;
  /// Hard cap on fired reactions; exceeding it raises SimulationError.
  std::uint64_t max_steps = 2'000'000'000;
  /// Full propensity recompute cadence; guards against float drift in the
  /// incrementally maintained total.
  std::uint32_t recompute_interval = 4096;
  /// With record=false only the final sample at t_end is kept.
  bool record = true;
};

struct SsaStats {
  std::uint64_t steps = 0;
  std::uint64_t boluses = 0;
  /// Largest relative gap between the running total propensity and a fresh
  /// recompute, over all periodic checks.
  double max_relative_drift = 0.0;
};

/// Exact stochastic simulation (direct method). Bolus events interrupt the
/// current waiting interval; the residual wait is redrawn, which is exact
/// because the exponential is memoryless. Samples at an event time show the
/// post-event state. Runs are bit-reproducible for a given seed.
Trajectory ssa_run(const NetworkSpec& network, const BolusSchedule& schedule,
                   double t_end, std::uint64_t seed,
                   const SsaOptions& options = {}, SsaStats* stats = nullptr);

}  // namespace chemneuron
