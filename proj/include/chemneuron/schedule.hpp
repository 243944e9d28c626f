#pragma once

#include <span>
#include <vector>

#include "chemneuron/network.hpp"

namespace chemneuron {

/// Timed injection of `count` copies of one species.
struct BolusEvent {
  double time = 0.0;
  SpeciesId species = 0;
  Count count = 0;
  bool operator==(const BolusEvent&) const = default;
};

/// Time-ordered injection events. Construction sorts stably by time, so
/// events given at equal times keep their relative order.
class BolusSchedule {
 public:
  BolusSchedule() = default;
  explicit BolusSchedule(std::vector<BolusEvent> events);

  std::span<const BolusEvent> events() const { return events_; }
  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }

 private:
  std::vector<BolusEvent> events_;
};

/// Adds the event's molecules to the state and advances its clock to the
/// event time. Throws SimulationError when the event lies in the past.
void apply_bolus(SimState& state, const BolusEvent& event);

}  // namespace chemneuron
