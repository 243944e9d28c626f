#pragma once

#include <cstdint>

#include "chemneuron/network.hpp"
#include "chemneuron/schedule.hpp"
#include "chemneuron/trajectory.hpp"

namespace chemneuron {

struct OdeOptions {
  double stride = 1e-3;
  double rtol = 1e-8;
  double atol = 1e-10;
  double h_init = 1e-4;
  std::uint64_t max_steps = 100'000'000;
};

/// Mean-field integration of the rate equations (Dormand-Prince 5(4),
/// adaptive step). Boluses apply as jumps. Deterministic companion to
/// ssa_run for sanity checks and fast parameter exploration; throws
/// SimulationError when step control underflows.
Trajectory ode_run(const NetworkSpec& network, const BolusSchedule& schedule,
                   double t_end, const OdeOptions& options = {});

}  // namespace chemneuron
