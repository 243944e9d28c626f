#include "chemneuron/schedule.hpp"

#include <algorithm>

#include <fmt/core.h>

namespace chemneuron {

BolusSchedule::BolusSchedule(std::vector<BolusEvent> events)
    : events_(std::move(events)) {
  for (const auto& e : events_) {
    if (e.count <= 0) {
      throw ConfigError(
          fmt::format("bolus count must be positive, got {} at t={}",
                      e.count, e.time));
    }
    if (e.time < 0.0) {
      throw ConfigError(
          fmt::format("bolus time must be nonnegative, got {}", e.time));
    }
  }
  std::stable_sort(
      events_.begin(), events_.end(),
      [](const BolusEvent& a, const BolusEvent& b) { return a.time < b.time; });
}

void apply_bolus(SimState& state, const BolusEvent& event) {
  if (event.time < state.time) {
    throw SimulationError(
        fmt::format("bolus at t={} lies before current time t={}", event.time,
                    state.time));
  }
  state.counts.at(static_cast<std::size_t>(event.species)) += event.count;
  state.time = event.time;
}

}  // namespace chemneuron
