#include "chemneuron/stimulus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <string>

#include "chemneuron/cn_model.hpp"
#include "chemneuron/errors.hpp"
#include "chemneuron/rng.hpp"

namespace chemneuron {

ChannelSchedule::ChannelSchedule(std::vector<ChannelEvent> events)
    : events_(std::move(events)) {
  for (const auto& e : events_) {
    if (e.time < 0.0) {
      throw ConfigError(
          fmt::format("schedule event at negative time {}", e.time));
    }
    if (e.count <= 0) {
      throw ConfigError(fmt::format(
          "schedule event for channel {} must inject a positive count",
          e.channel));
    }
    if (e.channel < 1) {
      throw ConfigError(
          fmt::format("channel indices are 1-based, got {}", e.channel));
    }
  }
  std::stable_sort(events_.begin(), events_.end(),
                   [](const ChannelEvent& a, const ChannelEvent& b) {
                     return a.time < b.time;
                   });
}

BolusSchedule ChannelSchedule::bind_to_network(
    const NetworkSpec& network) const {
  std::vector<BolusEvent> bound;
  bound.reserve(events_.size());
  for (const auto& e : events_) {
    const std::string name = input_species(e.channel);
    auto id = network.find_species(name);
    if (!id) {
      throw ConfigError(fmt::format(
          "schedule drives channel {} but the network has no species {}",
          e.channel, name));
    }
    bound.push_back(BolusEvent{e.time, *id, e.count});
  }
  return BolusSchedule(std::move(bound));
}

void ChannelSchedule::write_csv(std::ostream& out) const {
  out << "time,channel,count\n";
  for (const auto& e : events_) {
    out << fmt::format("{:.9g},{},{}\n", e.time, e.channel, e.count);
  }
}

ChannelSchedule ChannelSchedule::read_csv(std::string_view text) {
  std::vector<ChannelEvent> events;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = eol == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto fail = [line_no](std::string_view what) -> void {
      throw ParseError(
          fmt::format("schedule CSV line {}: {}", line_no, what), line_no, 1);
    };
    if (!line.empty() && !(line_no == 1 && line == "time,channel,count")) {
      std::array<std::string_view, 3> fields;
      std::size_t start = 0;
      for (int i = 0; i < 3; ++i) {
        std::size_t comma = line.find(',', start);
        if (i < 2 && comma == std::string_view::npos) {
          fail("expected time,channel,count");
        }
        if (i == 2 && comma != std::string_view::npos) {
          fail("expected exactly three fields");
        }
        fields[static_cast<std::size_t>(i)] =
            comma == std::string_view::npos ? line.substr(start)
                                            : line.substr(start, comma - start);
        start = comma == std::string_view::npos ? line.size() : comma + 1;
      }
      ChannelEvent e;
      auto parse_into = [&fail](std::string_view field, auto& value) {
        auto [ptr, ec] =
            std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc{} || ptr != field.data() + field.size()) {
          fail(fmt::format("malformed field '{}'", field));
        }
      };
      parse_into(fields[0], e.time);
      parse_into(fields[1], e.channel);
      parse_into(fields[2], e.count);
      events.push_back(e);
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return ChannelSchedule(std::move(events));
}

namespace {

const ChannelProcess& process_for(std::span<const ChannelProcess> processes,
                                  int channel) {
  for (const auto& p : processes) {
    if (p.channel == channel) return p;
  }
  throw ConfigError(
      fmt::format("follower references unknown channel {}", channel));
}

/// Channels in dependency order, parents before followers; rejects cycles.
std::vector<int> topo_order(std::span<const ChannelProcess> processes) {
  std::map<int, int> state;  // 0 new, 1 visiting, 2 done
  for (const auto& p : processes) {
    if (!state.emplace(p.channel, 0).second) {
      throw ConfigError(
          fmt::format("duplicate process for channel {}", p.channel));
    }
  }
  std::vector<int> order;
  auto visit = [&](auto&& self, int channel) -> void {
    int& s = state.at(channel);
    if (s == 2) return;
    if (s == 1) {
      throw ConfigError(fmt::format(
          "follower references form a cycle through channel {}", channel));
    }
    s = 1;
    const auto& p = process_for(processes, channel);
    if (const auto* f = std::get_if<FollowerProcess>(&p.kind)) {
      if (!state.contains(f->of_channel)) {
        throw ConfigError(fmt::format(
            "follower references unknown channel {}", f->of_channel));
      }
      self(self, f->of_channel);
    }
    s = 2;
    order.push_back(channel);
  };
  for (const auto& p : processes) visit(visit, p.channel);
  return order;
}

}  // namespace

ChannelSchedule generate_schedule(std::span<const ChannelProcess> processes,
                                  Count beta, double t_end,
                                  std::uint64_t seed) {
  if (!(t_end > 0.0)) {
    throw ConfigError(fmt::format("t_end must be > 0, got {}", t_end));
  }
  if (beta < 1) {
    throw ConfigError(fmt::format("bolus size must be >= 1, got {}", beta));
  }

  std::map<int, std::vector<double>> times_by_channel;
  for (int channel : topo_order(processes)) {
    const auto& p = process_for(processes, channel);
    Xoshiro256 rng(derive_seed(seed, static_cast<std::uint64_t>(channel)));
    std::vector<double> times;
    if (const auto* poisson = std::get_if<PoissonProcess>(&p.kind)) {
      if (!(poisson->frequency > 0.0)) {
        throw ConfigError(fmt::format(
            "channel {} frequency must be > 0, got {}", channel,
            poisson->frequency));
      }
      double t = 0.0;
      while (true) {
        t += rng.exponential(poisson->frequency);
        if (t > t_end) break;
        times.push_back(t);
      }
    } else if (const auto* follower = std::get_if<FollowerProcess>(&p.kind)) {
      if (follower->delta < 0.0 || follower->sigma2 < 0.0) {
        throw ConfigError(fmt::format(
            "channel {} follower needs delta >= 0 and sigma2 >= 0", channel));
      }
      const double sigma = std::sqrt(follower->sigma2);
      for (double parent_time : times_by_channel.at(follower->of_channel)) {
        const double delay =
            std::max(0.0, follower->delta + rng.normal(0.0, sigma));
        const double t = parent_time + delay;
        if (t <= t_end) times.push_back(t);
      }
      std::sort(times.begin(), times.end());
    } else {
      const auto& fixed = std::get<FixedProcess>(p.kind);
      for (double t : fixed.times) {
        if (t >= 0.0 && t <= t_end) times.push_back(t);
      }
      std::sort(times.begin(), times.end());
    }
    times_by_channel.emplace(channel, std::move(times));
  }

  std::vector<ChannelEvent> events;
  for (const auto& [channel, times] : times_by_channel) {
    for (double t : times) events.push_back({t, channel, beta});
  }
  return ChannelSchedule(std::move(events));
}

ChannelSchedule associative_schedule(const AssociativePattern& pattern) {
  if (pattern.coincidences < 0) {
    throw ConfigError("coincidences must be >= 0");
  }
  if (pattern.beta < 1) {
    throw ConfigError("bolus size must be >= 1");
  }
  std::vector<ChannelEvent> events;
  events.push_back({pattern.probe_pre, 2, pattern.beta});
  double t = pattern.first_pair;
  for (int i = 0; i < pattern.coincidences; ++i) {
    events.push_back({t, 1, pattern.beta});
    events.push_back({t + pattern.pair_jitter, 2, pattern.beta});
    t += pattern.pair_spacing;
  }
  const double last_pair =
      pattern.coincidences > 0 ? t - pattern.pair_spacing : pattern.probe_pre;
  events.push_back({last_pair + pattern.probe_post_gap, 2, pattern.beta});
  return ChannelSchedule(std::move(events));
}

}  // namespace chemneuron
