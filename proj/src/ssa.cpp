#include "chemneuron/ssa.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "chemneuron/errors.hpp"
#include "chemneuron/rng.hpp"

namespace chemneuron {

namespace {

/// species -> reactions whose propensity reads that species (as reactant
/// or as Hill modulator).
std::vector<std::vector<std::int32_t>> build_readers(
    const NetworkSpec& network) {
  std::vector<std::vector<std::int32_t>> readers(network.species_count());
  auto reactions = network.reactions();
  for (std::size_t j = 0; j < reactions.size(); ++j) {
    auto note = [&](SpeciesId s) {
      auto& list = readers[static_cast<std::size_t>(s)];
      if (list.empty() || list.back() != static_cast<std::int32_t>(j)) {
        list.push_back(static_cast<std::int32_t>(j));
      }
    };
    for (SpeciesId s : reactions[j].reactants) note(s);
    if (reactions[j].hill) note(reactions[j].hill->modulator);
  }
  return readers;
}

class Engine {
 public:
  Engine(const NetworkSpec& network, std::uint64_t seed,
         const SsaOptions& options, SsaStats* stats)
      : network_(network),
        options_(options),
        stats_(stats),
        rng_(seed),
        state_(network.initial_state()),
        readers_(build_readers(network)) {
    if (!(options.stride > 0.0)) {
      throw ConfigError(
          fmt::format("sampling stride must be positive, got {}",
                      options.stride));
    }
    auto reactions = network.reactions();
    deltas_.reserve(reactions.size());
    dependents_.reserve(reactions.size());
    for (const auto& r : reactions) {
      deltas_.push_back(net_stoichiometry(network, r));
      std::vector<std::int32_t> deps;
      for (const auto& entry : deltas_.back()) {
        const auto& list = readers_[static_cast<std::size_t>(entry.species)];
        deps.insert(deps.end(), list.begin(), list.end());
      }
      std::sort(deps.begin(), deps.end());
      deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
      dependents_.push_back(std::move(deps));
    }
    propensities_.resize(reactions.size());
    recompute_total();
  }

  Trajectory run(const BolusSchedule& schedule, double t_end) {
    std::vector<std::string> names;
    names.reserve(network_.species_count());
    for (const auto& s : network_.species()) names.push_back(s.name);
    Trajectory trajectory(std::move(names), options_.stride);

    auto events = schedule.events();
    std::size_t next_event = 0;
    while (next_event < events.size() && events[next_event].time < state_.time)
      ++next_event;

    while (true) {
      double t_reaction = std::numeric_limits<double>::infinity();
      if (total_ > 0.0) t_reaction = state_.time + rng_.exponential(total_);
      double t_bolus = next_event < events.size()
                           ? events[next_event].time
                           : std::numeric_limits<double>::infinity();

      if (t_reaction > t_end && t_bolus > t_end) {
        emit_until(trajectory, t_end, /*inclusive=*/true);
        break;
      }
      if (t_bolus <= t_reaction) {
        // The interrupted residual wait is redrawn next pass; exact for
        // exponential waiting times.
        emit_until(trajectory, t_bolus, /*inclusive=*/false);
        const auto& event = events[next_event];
        if (network_.is_clamped(event.species)) {
          // A clamp absorbs the injection; only the clock advances.
          state_.time = event.time;
        } else {
          apply_bolus(state_, event);
          refresh_dependents(readers_[static_cast<std::size_t>(event.species)]);
        }
        ++next_event;
        if (stats_) ++stats_->boluses;
        continue;
      }
      emit_until(trajectory, t_reaction, /*inclusive=*/false);
      state_.time = t_reaction;
      fire(select_reaction());
    }
    return trajectory;
  }

 private:
  std::size_t select_reaction() {
    double r = rng_.uniform01() * total_;
    double cumulative = 0.0;
    std::size_t last_live = propensities_.size();
    for (std::size_t j = 0; j < propensities_.size(); ++j) {
      if (propensities_[j] <= 0.0) continue;
      cumulative += propensities_[j];
      last_live = j;
      if (r <= cumulative) return j;
    }
    // Rounding in the cumulative walk can leave r marginally above the
    // final sum; attribute the draw to the last live reaction.
    if (last_live < propensities_.size()) return last_live;
    throw SimulationError(fmt::format(
        "no reaction selectable at t={} (total propensity {})", state_.time,
        total_));
  }

  void fire(std::size_t j) {
    for (const auto& entry : deltas_[j]) {
      auto& count = state_.counts[static_cast<std::size_t>(entry.species)];
      count += entry.change;
      if (count < 0) {
        throw SimulationError(fmt::format(
            "species {} driven negative at t={}",
            network_.species_name(entry.species), state_.time));
      }
    }
    refresh_dependents(dependents_[j]);
    ++steps_;
    if (stats_) ++stats_->steps;
    if (steps_ > options_.max_steps) {
      throw SimulationError(fmt::format(
          "step limit {} exceeded at t={}", options_.max_steps, state_.time));
    }
    if (options_.recompute_interval > 0 &&
        steps_ % options_.recompute_interval == 0) {
      double running = total_;
      recompute_total();
      if (stats_) {
        double scale = std::max(total_, 1e-300);
        stats_->max_relative_drift = std::max(
            stats_->max_relative_drift, std::abs(running - total_) / scale);
      }
    }
  }

  void refresh_dependents(const std::vector<std::int32_t>& deps) {
    auto reactions = network_.reactions();
    for (std::int32_t j : deps) {
      double fresh = propensity(reactions[static_cast<std::size_t>(j)], state_);
      total_ += fresh - propensities_[static_cast<std::size_t>(j)];
      propensities_[static_cast<std::size_t>(j)] = fresh;
    }
    if (total_ < 0.0) total_ = 0.0;
  }

  void recompute_total() {
    auto reactions = network_.reactions();
    total_ = 0.0;
    for (std::size_t j = 0; j < reactions.size(); ++j) {
      propensities_[j] = propensity(reactions[j], state_);
      total_ += propensities_[j];
    }
  }

  /// Emits pending grid samples below `limit` (or at it, when inclusive)
  /// using the current state. Called before a state change lands, so a
  /// sample coinciding with an event time is deferred until after the
  /// event applies.
  void emit_until(Trajectory& trajectory, double limit, bool inclusive) {
    if (!options_.record) {
      if (inclusive) emit_row(trajectory, limit);
      return;
    }
    while (true) {
      double t = static_cast<double>(sample_index_) * options_.stride;
      if (inclusive ? t > limit : t >= limit) break;
      emit_row(trajectory, t);
      ++sample_index_;
    }
    if (inclusive) {
      double last = trajectory.sample_count() == 0
                        ? -1.0
                        : trajectory.times().back();
      if (last < limit) emit_row(trajectory, limit);
    }
  }

  void emit_row(Trajectory& trajectory, double t) {
    row_.assign(state_.counts.begin(), state_.counts.end());
    trajectory.append(t, row_);
  }

  const NetworkSpec& network_;
  const SsaOptions& options_;
  SsaStats* stats_;
  Xoshiro256 rng_;
  SimState state_;
  std::vector<std::vector<std::int32_t>> readers_;
  std::vector<std::vector<StoichEntry>> deltas_;
  std::vector<std::vector<std::int32_t>> dependents_;
  std::vector<double> propensities_;
  double total_ = 0.0;
  std::uint64_t steps_ = 0;
  std::uint64_t sample_index_ = 0;
  std::vector<double> row_;
};

}  // namespace

Trajectory ssa_run(const NetworkSpec& network, const BolusSchedule& schedule,
                   double t_end, std::uint64_t seed, const SsaOptions& options,
                   SsaStats* stats) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw ConfigError(fmt::format("t_end must be finite and >= 0, got {}",
                                  t_end));
  }
  if (stats) *stats = SsaStats{};
  Engine engine(network, seed, options, stats);
  return engine.run(schedule, t_end);
}

}  // namespace chemneuron
