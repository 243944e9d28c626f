#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chemneuron/network.hpp"

namespace chemneuron {

/// Fixed-stride sampling configuration. Samples are taken at k*stride for
/// k = 0, 1, ... up to the end of the run; per-event logging is not kept,
/// which bounds memory on long runs.
struct RecorderConfig {
  double stride = 1e-3;
};

/// Recorded time series of per-species values. SSA runs store integer
/// counts (exactly representable); the mean-field integrator stores reals.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<std::string> species_names, double stride);

  void append(double time, std::span<const double> row);

  const std::vector<std::string>& species_names() const { return names_; }
  const std::vector<double>& times() const { return times_; }
  double stride() const { return stride_; }
  std::size_t sample_count() const { return times_.size(); }

  std::span<const double> row(std::size_t sample) const;
  double value(std::size_t sample, std::size_t species) const;

  /// Column index for a species name; throws ConfigError when absent.
  std::size_t column(std::string_view species_name) const;

  /// Index of the last sample with time <= t; throws ConfigError when the
  /// trajectory starts after t.
  std::size_t index_at_or_before(double t) const;

  /// Mean of one species over samples with time in [t_start, t_end].
  double window_mean(std::size_t species, double t_start, double t_end) const;

  /// CSV with header `time,<species names...>`; times use 9 significant
  /// digits and integral values print without a decimal point.
  void write_csv(std::ostream& out) const;

  bool operator==(const Trajectory&) const = default;

 private:
  std::vector<std::string> names_;
  double stride_ = 0.0;
  std::vector<double> times_;
  std::vector<double> data_;  // row-major, sample_count x names_.size()
};

}  // namespace chemneuron
