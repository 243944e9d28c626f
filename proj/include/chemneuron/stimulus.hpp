#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "chemneuron/network.hpp"
#include "chemneuron/schedule.hpp"

namespace chemneuron {

/// Independent stream with exponential inter-event gaps (rate = frequency).
struct PoissonProcess {
  double frequency = 1.0;
};

/// Fires once per parent event at parent_time + delta + xi with
/// xi ~ Normal(0, sigma2). Negative sampled delays clamp to zero
/// (simultaneous firing) rather than letting the child precede its parent.
struct FollowerProcess {
  int of_channel = 1;
  double delta = 0.0;
  double sigma2 = 0.0;
};

/// Deterministic event times (sorted).
struct FixedProcess {
  std::vector<double> times;
};

struct ChannelProcess {
  int channel = 1;  // 1-based, matches input species I{channel}
  std::variant<PoissonProcess, FollowerProcess, FixedProcess> kind;
};

/// One injection addressed by channel rather than species id, so the same
/// schedule can replay against any network that has the input species.
struct ChannelEvent {
  double time = 0.0;
  int channel = 1;
  Count count = 0;
  bool operator==(const ChannelEvent&) const = default;
};

/// Time-sorted channel-level schedule, the audit/replay artifact of every
/// experiment. CSV form: `time,channel,count`.
class ChannelSchedule {
 public:
  ChannelSchedule() = default;
  explicit ChannelSchedule(std::vector<ChannelEvent> events);

  std::span<const ChannelEvent> events() const { return events_; }
  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }

  /// Resolves channel n to species I{n}; throws ConfigError when the
  /// network lacks one of the input species.
  BolusSchedule bind_to_network(const NetworkSpec& network) const;

  void write_csv(std::ostream& out) const;
  static ChannelSchedule read_csv(std::string_view text);

 private:
  std::vector<ChannelEvent> events_;
};

/// Draws all stimulus streams for one run. Followers fire relative to
/// their parent's realized events, so the graph of `of_channel` references
/// must be acyclic. Events outside [0, t_end] are dropped. Every event
/// injects `beta` precursor copies. Reproducible: each channel owns an RNG
/// stream derived from (seed, channel), independent of evaluation order.
ChannelSchedule generate_schedule(std::span<const ChannelProcess> processes,
                                  Count beta, double t_end,
                                  std::uint64_t seed);

/// Deterministic two-channel pattern for the associative task: one
/// channel-2 probe, `coincidences` paired channel-1+channel-2 events, one
/// closing channel-2 probe. Spacings default to several multiples of the
/// internal-state lifetime so consecutive events do not overlap.
struct AssociativePattern {
  double probe_pre = 10.0;       // time of the pre-training probe
  double first_pair = 60.0;      // time of the first coincidence
  int coincidences = 5;
  double pair_spacing = 50.0;
  double pair_jitter = 0.0;      // channel-2 offset within a pair
  double probe_post_gap = 50.0;  // gap from last pair to closing probe
  Count beta = 20;
};

ChannelSchedule associative_schedule(const AssociativePattern& pattern);

}  // namespace chemneuron
