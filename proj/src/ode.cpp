#include "chemneuron/ode.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "chemneuron/errors.hpp"

namespace chemneuron {

namespace {

// Dormand-Prince 5(4) tableau. The last stage row doubles as the 5th order
// weights (FSAL), `b4` holds the embedded 4th order weights.
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,         7571.0 / 16695,
                           393.0 / 640,       -92097.0 / 339200,
                           187.0 / 2100,      1.0 / 40};

class Integrator {
 public:
  Integrator(const NetworkSpec& network, const OdeOptions& options)
      : network_(network), options_(options) {
    for (const auto& r : network.reactions()) {
      stoich_.push_back(net_stoichiometry(network, r));
    }
    const std::size_t n = network.species_count();
    y_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      y_[i] = static_cast<double>(network.initial_counts()[i]);
    }
    for (auto& k : k_) k.resize(n);
    y_stage_.resize(n);
    y_next_.resize(n);
    h_ = options.h_init;
  }

  std::vector<double>& state() { return y_; }
  double time() const { return t_; }

  void jump(const BolusEvent& event) {
    if (!network_.is_clamped(event.species)) {
      y_[static_cast<std::size_t>(event.species)] +=
          static_cast<double>(event.count);
    }
    t_ = std::max(t_, event.time);
    fsal_valid_ = false;
  }

  /// Integrates up to exactly t_target with adaptive error control.
  void advance_to(double t_target) {
    while (t_ < t_target) {
      if (++steps_ > options_.max_steps) {
        throw SimulationError(fmt::format(
            "integrator step limit {} exceeded at t={}", options_.max_steps,
            t_));
      }
      double h = std::min(h_, t_target - t_);
      const double h_floor =
          16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t_);
      if (h < h_floor) {
        throw SimulationError(
            fmt::format("integrator step size underflow at t={}", t_));
      }
      if (attempt_step(h)) {
        t_ = (t_ + h >= t_target && h == t_target - t_) ? t_target : t_ + h;
        y_.swap(y_next_);
        k_[0].swap(k_[6]);
        fsal_valid_ = true;
      }
    }
  }

 private:
  void deriv(const std::vector<double>& y, std::vector<double>& dydt) const {
    std::fill(dydt.begin(), dydt.end(), 0.0);
    auto reactions = network_.reactions();
    for (std::size_t j = 0; j < reactions.size(); ++j) {
      const double a = propensity(reactions[j], std::span<const double>(y));
      if (a == 0.0) continue;
      for (const auto& entry : stoich_[j]) {
        dydt[static_cast<std::size_t>(entry.species)] +=
            static_cast<double>(entry.change) * a;
      }
    }
  }

  /// One trial step of size h; on acceptance fills y_next_ and k_[6] and
  /// updates the proposed step size. Returns false when rejected.
  bool attempt_step(double h) {
    const std::size_t n = y_.size();
    if (!fsal_valid_) deriv(y_, k_[0]);
    for (int stage = 1; stage < 7; ++stage) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int prev = 0; prev < stage; ++prev) {
          acc += kA[stage][prev] * k_[prev][i];
        }
        y_stage_[i] = y_[i] + h * acc;
      }
      deriv(y_stage_, k_[stage]);
    }
    // Stage 6 evaluated y at the 5th order solution (FSAL): y_stage_ is
    // already y_next.
    y_next_ = y_stage_;

    double err_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double e4 = 0.0;
      for (int stage = 0; stage < 7; ++stage) {
        e4 += kB4[stage] * k_[stage][i];
      }
      const double err_i = y_next_[i] - (y_[i] + h * e4);
      const double scale =
          options_.atol +
          options_.rtol * std::max(std::abs(y_[i]), std::abs(y_next_[i]));
      err_sq += (err_i / scale) * (err_i / scale);
    }
    const double err = std::sqrt(err_sq / static_cast<double>(n));
    double factor = 5.0;
    if (!std::isfinite(err)) {
      factor = 0.2;
    } else if (err > 0.0) {
      factor = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    }
    h_ = h * factor;
    return std::isfinite(err) && err <= 1.0;
  }

  const NetworkSpec& network_;
  const OdeOptions& options_;
  std::vector<std::vector<StoichEntry>> stoich_;
  std::vector<double> y_;
  std::vector<double> k_[7];
  std::vector<double> y_stage_;
  std::vector<double> y_next_;
  double t_ = 0.0;
  double h_ = 0.0;
  bool fsal_valid_ = false;
  std::uint64_t steps_ = 0;
};

}  // namespace

Trajectory ode_run(const NetworkSpec& network, const BolusSchedule& schedule,
                   double t_end, const OdeOptions& options) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw ConfigError(
        fmt::format("t_end must be finite and >= 0, got {}", t_end));
  }
  if (!(options.stride > 0.0)) {
    throw ConfigError(fmt::format("sampling stride must be positive, got {}",
                                  options.stride));
  }

  std::vector<std::string> names;
  names.reserve(network.species_count());
  for (const auto& s : network.species()) names.push_back(s.name);
  Trajectory trajectory(std::move(names), options.stride);

  Integrator integrator(network, options);
  auto events = schedule.events();
  std::size_t next_event = 0;
  std::uint64_t sample_index = 0;

  while (true) {
    double t_sample = static_cast<double>(sample_index) * options.stride;
    double t_event = next_event < events.size()
                         ? events[next_event].time
                         : std::numeric_limits<double>::infinity();
    double barrier = std::min({t_sample, t_event, t_end});
    integrator.advance_to(barrier);

    // Events first, so a sample at the same instant sees the jump.
    while (next_event < events.size() &&
           events[next_event].time <= integrator.time()) {
      integrator.jump(events[next_event]);
      ++next_event;
    }
    if (t_sample <= integrator.time() && t_sample <= t_end) {
      trajectory.append(t_sample, integrator.state());
      ++sample_index;
      continue;
    }
    if (integrator.time() >= t_end) {
      if (trajectory.sample_count() == 0 ||
          trajectory.times().back() < t_end) {
        trajectory.append(t_end, integrator.state());
      }
      break;
    }
  }
  return trajectory;
}

}  // namespace chemneuron
