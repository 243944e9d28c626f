#include "chemneuron/trajectory.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

#include "chemneuron/errors.hpp"

namespace chemneuron {

Trajectory::Trajectory(std::vector<std::string> species_names, double stride)
    : names_(std::move(species_names)), stride_(stride) {}

void Trajectory::append(double time, std::span<const double> row) {
  if (row.size() != names_.size()) {
    throw ConfigError(fmt::format("trajectory row has {} values, expected {}",
                                  row.size(), names_.size()));
  }
  if (!times_.empty() && time < times_.back()) {
    throw ConfigError(fmt::format(
        "trajectory samples must be time-ordered ({} after {})", time,
        times_.back()));
  }
  times_.push_back(time);
  data_.insert(data_.end(), row.begin(), row.end());
}

std::span<const double> Trajectory::row(std::size_t sample) const {
  if (sample >= times_.size()) {
    throw ConfigError(fmt::format("sample index {} out of range ({} samples)",
                                  sample, times_.size()));
  }
  return {data_.data() + sample * names_.size(), names_.size()};
}

double Trajectory::value(std::size_t sample, std::size_t species) const {
  if (species >= names_.size()) {
    throw ConfigError(fmt::format("species index {} out of range ({} species)",
                                  species, names_.size()));
  }
  return row(sample)[species];
}

std::size_t Trajectory::column(std::string_view species_name) const {
  auto it = std::find(names_.begin(), names_.end(), species_name);
  if (it == names_.end()) {
    throw ConfigError(
        fmt::format("trajectory has no species '{}'", species_name));
  }
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t Trajectory::index_at_or_before(double t) const {
  if (times_.empty() || times_.front() > t) {
    throw ConfigError(fmt::format("no sample at or before t={}", t));
  }
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return static_cast<std::size_t>(it - times_.begin()) - 1;
}

double Trajectory::window_mean(std::size_t species, double t_start,
                               double t_end) const {
  if (species >= names_.size()) {
    throw ConfigError(fmt::format("species index {} out of range ({} species)",
                                  species, names_.size()));
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (times_[i] < t_start || times_[i] > t_end) continue;
    sum += value(i, species);
    ++n;
  }
  if (n == 0) {
    throw ConfigError(
        fmt::format("no samples in window [{}, {}]", t_start, t_end));
  }
  return sum / static_cast<double>(n);
}

namespace {

void print_value(std::ostream& out, double v) {
  double integral = 0.0;
  if (std::modf(v, &integral) == 0.0 && std::abs(v) < 1e15) {
    out << fmt::format("{}", static_cast<long long>(integral));
  } else {
    out << fmt::format("{}", v);
  }
}

}  // namespace

void Trajectory::write_csv(std::ostream& out) const {
  out << "time";
  for (const auto& name : names_) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < times_.size(); ++i) {
    out << fmt::format("{:.9g}", times_[i]);
    auto r = row(i);
    for (double v : r) {
      out << ',';
      print_value(out, v);
    }
    out << '\n';
  }
}

}  // namespace chemneuron
