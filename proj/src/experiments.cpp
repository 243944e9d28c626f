#include "chemneuron/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <ostream>
#include <utility>

#include <fmt/format.h>

#include "chemneuron/errors.hpp"
#include "chemneuron/parallel.hpp"
#include "chemneuron/rng.hpp"

namespace chemneuron {
namespace {

struct Stat {
  double sum = 0.0;
  double sumsq = 0.0;
  int n = 0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double sample_var() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double v = (sumsq - n * m * m) / (n - 1);
    return v > 0.0 ? v : 0.0;
  }
  double se() const { return n ? std::sqrt(sample_var() / n) : 0.0; }
};

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

/// Seed tree: replicate i gets a child seed of the master; within a
/// replicate, index 0 drives the simulator and indices 1..N belong to the
/// stimulus channels (generate_schedule derives them itself).
std::uint64_t replicate_seed(std::uint64_t master, std::size_t index) {
  return derive_seed(master, static_cast<std::uint64_t>(index) + 1);
}

}  // namespace

std::uint64_t ensemble_replicate_seed(std::uint64_t master,
                                      std::size_t index) {
  return replicate_seed(master, index);
}

NetworkSpec build_cn_variant(const CNConfig& config, CNVariant variant) {
  switch (variant) {
    case CNVariant::kBasic:
      return build_basic_cn(config);
    case CNVariant::kBio:
      return build_bio_cn(config);
    case CNVariant::kHill:
      return build_hill_cn(config);
  }
  throw ConfigError("unknown network variant");
}

namespace {

/// Ladder rates scaled up together: the occupancy curve (hence the
/// threshold) only depends on the ratios, but the ladder now reaches
/// equilibrium within a single bolus pulse. Conversion and removal are
/// raised likewise, so each bolus becomes a short, well separated B pulse
/// and coincidence means overlap of those pulses.
BasicRates pulse_resolved_rates() {
  BasicRates r;
  r.k_plus = 100.0;
  r.k_minus = 500.0;
  r.k_minus_last = 50.0;
  r.k_AB = 20.0;
  r.k_B_decay = 20.0;
  r.k_AE = 1.0;
  return r;
}

/// Pulse-resolved rates with the unbinding ratios scaled fourfold, which
/// moves the threshold to ~15-20 B. Useful when the bolus size is swept as
/// a threshold fraction: the ladder itself sequesters roughly
/// occupancy * e_total copies of B, so the threshold must sit well above
/// that demand for small boli to remain meaningful.
BasicRates steep_threshold_rates() {
  BasicRates r = pulse_resolved_rates();
  r.k_minus = 2000.0;
  r.k_minus_last = 200.0;
  return r;
}

template <typename MakeRun, typename Success>
TaskEnsemble run_ensemble(const EnsembleOptions& ensemble, MakeRun&& make_run,
                          Success&& is_success) {
  if (ensemble.replicates < 0) {
    throw ConfigError("replicates must be nonnegative");
  }
  TaskEnsemble out;
  out.runs.resize(static_cast<std::size_t>(ensemble.replicates));
  parallel_for(out.runs.size(), ensemble.jobs, [&](std::size_t i) {
    out.runs[i] = make_run(replicate_seed(ensemble.master_seed, i));
  });
  for (const auto& run : out.runs) {
    if (is_success(run)) ++out.successes;
  }
  return out;
}

WeightSummary summarize_run(const NetworkSpec& network,
                            const ChannelSchedule& schedule, int channels,
                            double t_transient, double t_window,
                            double stride, std::uint64_t ssa_seed) {
  SsaOptions options;
  options.stride = stride;
  const Trajectory trajectory =
      ssa_run(network, schedule.bind_to_network(network),
              t_transient + t_window, ssa_seed, options);
  return steady_state_weights(trajectory, channels, t_transient, t_window);
}

}  // namespace

WeightSummary steady_state_weights(const Trajectory& trajectory, int channels,
                                   double t_transient, double t_window) {
  if (channels < 1) throw ConfigError("channels must be positive");
  if (t_window <= 0.0) throw ConfigError("t_window must be positive");
  const double t_end = t_transient + t_window;
  if (trajectory.sample_count() == 0 ||
      trajectory.times().back() + 1e-9 < t_end) {
    throw ConfigError(
        fmt::format("steady-state window [{}, {}] extends past the recorded "
                    "trajectory",
                    t_transient, t_end));
  }

  WeightSummary summary;
  summary.window_start = t_transient;
  summary.window_end = t_end;
  summary.mean_weights.reserve(static_cast<std::size_t>(channels));
  for (int c = 1; c <= channels; ++c) {
    const std::size_t column = trajectory.column(weight_species(c));
    summary.mean_weights.push_back(
        trajectory.window_mean(column, t_transient, t_end));
  }
  const double total = std::accumulate(summary.mean_weights.begin(),
                                       summary.mean_weights.end(), 0.0);
  summary.normalized.assign(summary.mean_weights.size(), 0.0);
  if (total > 0.0) {
    for (std::size_t i = 0; i < summary.mean_weights.size(); ++i) {
      summary.normalized[i] = summary.mean_weights[i] / total;
    }
  }
  return summary;
}

double index_of_dispersion(const WeightSummary& summary) {
  const auto& w = summary.mean_weights;
  if (w.empty()) throw ConfigError("weight summary is empty");
  const double mu = std::accumulate(w.begin(), w.end(), 0.0) /
                    static_cast<double>(w.size());
  if (mu <= 0.0) {
    throw ConfigError("index of dispersion is undefined for zero mean weight");
  }
  double var = 0.0;
  for (double x : w) var += (x - mu) * (x - mu);
  var /= static_cast<double>(w.size());
  return std::sqrt(var) / mu;
}

std::vector<TriggerInterval> detect_trigger(const Trajectory& trajectory,
                                            std::string_view species,
                                            Count min_count,
                                            double min_duration) {
  const std::size_t column = trajectory.column(species);
  std::vector<TriggerInterval> out;
  bool inside = false;
  TriggerInterval current;
  for (std::size_t i = 0; i < trajectory.sample_count(); ++i) {
    const bool hot =
        trajectory.value(i, column) >= static_cast<double>(min_count);
    if (hot) {
      if (!inside) {
        inside = true;
        current.start = trajectory.times()[i];
      }
      current.end = trajectory.times()[i];
    } else if (inside) {
      inside = false;
      if (current.end - current.start >= min_duration) out.push_back(current);
    }
  }
  if (inside && current.end - current.start >= min_duration) {
    out.push_back(current);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operating points.

CNConfig fb_default_config() {
  CNConfig cn;
  cn.channels = 5;
  cn.chain_length = 1;  // saturating activation: weights track frequency
  cn.bolus_size = 10;
  cn.e_total = 40;
  return cn;
}

CNConfig tc_default_config() {
  CNConfig cn;
  cn.channels = 5;
  cn.chain_length = 5;
  // A small ladder pool keeps its B sequestration below the pulse supply.
  cn.e_total = 5;
  cn.basic = pulse_resolved_rates();
  // Single boli stay below the activation threshold, overlapping pairs
  // cross it: solo peak ~0.63 beta, joint peak ~1.3 beta, threshold ~12.
  // The standing background (5 channels x f=2 x beta / removal) stays near
  // 7.5, safely under the threshold, so the gate only opens on near
  // coincidences.
  cn.basic.k_minus = 1500.0;
  cn.basic.k_minus_last = 150.0;
  // Crisp pulses: precursor conversion much faster than the link lag, so
  // the leader's pulse has matured while the follower's is still ramping
  // when the pair crossing opens the gate.
  cn.basic.k_IA = 100.0;
  // Fast capture burst at gate opening samples that asymmetry, and slow
  // conversion holds the winners bound past the event (one capture per
  // coincidence) while still recycling before the next firing.
  cn.basic.k_AE = 10.0;
  cn.basic.k_EH = 5.0;
  cn.bolus_size = 15;
  return cn;
}

CNConfig associative_default_config() {
  CNConfig cn;
  cn.channels = 2;
  cn.chain_length = 5;
  cn.bolus_size = 30;
  cn.e_total = 2;
  cn.initial_weights = {100, 0};
  // Unweighted conversion is nearly closed; an input only reaches B
  // through the transport loop, so a bare channel-2 probe stays far below
  // threshold until coincident firing has grown H2.
  cn.basic.k_AB = 1e-4;
  cn.basic.k_AH = 0.02;
  return cn;
}

AssociativePattern associative_default_pattern() {
  AssociativePattern pattern;
  pattern.beta = 30;
  return pattern;
}

CNConfig delay_default_config() {
  CNConfig cn;
  cn.channels = 2;
  cn.chain_length = 5;
  // Learning capacity (active-form cycles) is the scarce resource here;
  // a small pool makes the head start of the earlier bolus count, while
  // four molecules keep the zero-delay split statistics well resolved.
  cn.e_total = 4;
  cn.basic = pulse_resolved_rates();
  // Pulse width ~0.1 with a threshold between one pulse peak (~0.37 beta)
  // and the coincident peak (~0.74 beta): two boli only learn together
  // while their pulses overlap, so the split decays over the delta sweep.
  // For m = 1 the same rates put the threshold at k_minus_last, far below
  // one pulse, and the earlier bolus simply captures the pool first.
  cn.basic.k_plus = 1.0;
  cn.basic.k_minus = 1500.0;
  cn.basic.k_minus_last = 15.0;
  // Boli must materialize well inside the smallest delay step, or the
  // leader's head start is spent ramping up instead of capturing.
  cn.basic.k_IA = 100.0;
  // Slow conversion makes capture one-shot: an active molecule grabbed
  // during the head start stays bound past the overlap, so the earlier
  // channel keeps its winnings instead of re-raffling them every cycle.
  cn.basic.k_EH = 2.0;
  cn.bolus_size = 820;
  return cn;
}

CNConfig bolus_default_config() {
  CNConfig cn;
  cn.channels = 3;
  cn.chain_length = 4;
  cn.e_total = 5;
  cn.basic = steep_threshold_rates();
  return cn;
}

CNConfig iod_default_config() {
  CNConfig cn;
  cn.channels = 5;
  cn.chain_length = 5;  // swept per point
  cn.e_total = 5;
  cn.basic = steep_threshold_rates();
  return cn;
}

// ---------------------------------------------------------------------------
// Frequency bias.

bool fb_success(const WeightSummary& summary, int biased_channels) {
  const int n = static_cast<int>(summary.mean_weights.size());
  if (biased_channels < 1 || biased_channels >= n) {
    throw ConfigError(
        fmt::format("biased_channels must be in [1, {}), got {}", n,
                    biased_channels));
  }
  double min_fast = summary.mean_weights[0];
  for (int i = 1; i < biased_channels; ++i) {
    min_fast = std::min(min_fast, summary.mean_weights[i]);
  }
  double max_slow = summary.mean_weights[biased_channels];
  for (int i = biased_channels + 1; i < n; ++i) {
    max_slow = std::max(max_slow, summary.mean_weights[i]);
  }
  return min_fast > max_slow;
}

TaskEnsemble run_fb(const FbOptions& options) {
  const int n = options.cn.channels;
  if (options.biased_channels < 1 || options.biased_channels >= n) {
    throw ConfigError("biased_channels must leave at least one slow channel");
  }
  std::vector<ChannelProcess> processes;
  processes.reserve(static_cast<std::size_t>(n));
  for (int c = 1; c <= n; ++c) {
    const double f =
        c <= options.biased_channels ? options.f_high : options.f_low;
    processes.push_back({c, PoissonProcess{f}});
  }
  const NetworkSpec network = build_cn_variant(options.cn, options.variant);
  const double t_end = options.t_transient + options.t_window;
  return run_ensemble(
      options.ensemble,
      [&](std::uint64_t seed) {
        const ChannelSchedule schedule =
            generate_schedule(processes, options.cn.bolus_size, t_end, seed);
        return summarize_run(network, schedule, n, options.t_transient,
                             options.t_window, options.sample_stride,
                             derive_seed(seed, 0));
      },
      [&](const WeightSummary& s) {
        return fb_success(s, options.biased_channels);
      });
}

// ---------------------------------------------------------------------------
// Time correlation.

bool tc_success(const WeightSummary& summary, int correlated_channels) {
  const int n = static_cast<int>(summary.mean_weights.size());
  if (correlated_channels < 2 || correlated_channels > n) {
    throw ConfigError(
        fmt::format("correlated_channels must be in [2, {}], got {}", n,
                    correlated_channels));
  }
  for (int i = 1; i < correlated_channels; ++i) {
    if (!(summary.mean_weights[i - 1] > summary.mean_weights[i])) return false;
  }
  double min_chain = summary.mean_weights[0];
  for (int i = 1; i < correlated_channels; ++i) {
    min_chain = std::min(min_chain, summary.mean_weights[i]);
  }
  for (int i = correlated_channels; i < n; ++i) {
    if (!(min_chain > summary.mean_weights[i])) return false;
  }
  return true;
}

TaskEnsemble run_tc(const TcOptions& options) {
  const int n = options.cn.channels;
  if (options.correlated_channels < 2 || options.correlated_channels > n) {
    throw ConfigError("correlated_channels must be between 2 and channels");
  }
  std::vector<ChannelProcess> processes;
  processes.reserve(static_cast<std::size_t>(n));
  processes.push_back({1, PoissonProcess{options.frequency}});
  for (int c = 2; c <= options.correlated_channels; ++c) {
    processes.push_back(
        {c, FollowerProcess{c - 1, options.delta, options.sigma2}});
  }
  for (int c = options.correlated_channels + 1; c <= n; ++c) {
    processes.push_back({c, PoissonProcess{options.frequency}});
  }
  const NetworkSpec network = build_cn_variant(options.cn, options.variant);
  const double t_end = options.t_transient + options.t_window;
  return run_ensemble(
      options.ensemble,
      [&](std::uint64_t seed) {
        const ChannelSchedule schedule =
            generate_schedule(processes, options.cn.bolus_size, t_end, seed);
        return summarize_run(network, schedule, n, options.t_transient,
                             options.t_window, options.sample_stride,
                             derive_seed(seed, 0));
      },
      [&](const WeightSummary& s) {
        return tc_success(s, options.correlated_channels);
      });
}

// ---------------------------------------------------------------------------
// Associative learning.

namespace {

AssocReport assoc_impl(const AssocOptions& options, const NetworkSpec& network,
                       const std::string& trigger) {
  const AssociativePattern& p = options.pattern;
  if (options.pair_window > p.pair_spacing) {
    throw ConfigError("pair_window must not exceed pair_spacing");
  }
  const double last_pair =
      p.first_pair + (p.coincidences - 1) * p.pair_spacing;
  const double post_probe = last_pair + p.probe_post_gap;
  const double t_end = post_probe + options.probe_window;

  const ChannelSchedule schedule = associative_schedule(p);
  SsaOptions ssa_options;
  ssa_options.stride = options.sample_stride;
  Trajectory trajectory =
      ssa_run(network, schedule.bind_to_network(network), t_end, options.seed,
              ssa_options);

  AssocReport report;
  report.triggers =
      detect_trigger(trajectory, trigger, options.min_trigger, 0.0);
  const auto fired_within = [&](double w0, double w1) {
    for (const auto& interval : report.triggers) {
      if (interval.start <= w1 && interval.end >= w0) return true;
    }
    return false;
  };
  report.pre_trigger =
      fired_within(p.probe_pre, p.probe_pre + options.probe_window);
  report.post_trigger =
      fired_within(post_probe, post_probe + options.probe_window);

  for (int channel = 1; channel <= 2; ++channel) {
    const std::size_t column = trajectory.column(weight_species(channel));
    double total = 0.0;
    for (int i = 0; i < p.coincidences; ++i) {
      const double at = p.first_pair + i * p.pair_spacing;
      const double before =
          trajectory.value(trajectory.index_at_or_before(at), column);
      const double after = trajectory.value(
          trajectory.index_at_or_before(at + options.pair_window), column);
      total += after - before;
    }
    const double per_pair =
        p.coincidences > 0 ? total / p.coincidences : 0.0;
    (channel == 1 ? report.dh1_per_pair : report.dh2_per_pair) = per_pair;
  }
  report.trajectory = std::move(trajectory);
  return report;
}

}  // namespace

AssocReport run_associative(const AssocOptions& options) {
  return assoc_impl(options, build_basic_cn(options.cn), trigger_species());
}

AssocReport run_associative_variant(const AssocOptions& options,
                                    CNVariant variant) {
  switch (variant) {
    case CNVariant::kBasic:
      return run_associative(options);
    case CNVariant::kBio:
      // The probed channel is 2; its decision signal is the activated
      // messenger of its own compartment.
      return assoc_impl(options, build_bio_cn(options.cn),
                        activated_input_species(2));
    case CNVariant::kHill:
      return assoc_impl(options, build_hill_cn(options.cn),
                        activated_input_species(2));
  }
  throw ConfigError("unknown network variant");
}

// ---------------------------------------------------------------------------
// Delay sweep.

DelaySweepResult sweep_delay(const DelaySweepOptions& options) {
  if (options.m_list.empty()) {
    throw ConfigError("sweep_delay needs at least one chain length");
  }
  if (options.replicates < 1) {
    throw ConfigError("sweep_delay needs at least one replicate");
  }

  struct Combo {
    int m;
    double removal;
  };
  std::vector<Combo> combos;
  if (!options.removal_rates.empty()) {
    for (double rate : options.removal_rates) {
      combos.push_back({options.m_list.front(), rate});
    }
  } else {
    for (int m : options.m_list) {
      combos.push_back({m, options.cn.basic.k_B_decay});
    }
  }

  DelaySweepResult result;
  std::size_t row_index = 0;
  for (const Combo& combo : combos) {
    CNConfig cn = options.cn;
    cn.channels = 2;
    cn.chain_length = combo.m;
    cn.basic.k_B_decay = combo.removal;
    const NetworkSpec network = build_basic_cn(cn);
    const auto h1 = static_cast<std::size_t>(network.species_id(weight_species(1)));
    const auto h2 = static_cast<std::size_t>(network.species_id(weight_species(2)));

    const std::size_t rows =
        options.delta_list.size() + (options.include_baseline ? 1 : 0);
    for (std::size_t row = 0; row < rows; ++row, ++row_index) {
      const bool baseline = row >= options.delta_list.size();
      const double delta = baseline ? 0.0 : options.delta_list[row];
      if (!baseline && delta < 0.0) {
        throw ConfigError("delays must be nonnegative");
      }

      const std::uint64_t row_seed =
          derive_seed(options.master_seed, row_index + 1);
      const auto n = static_cast<std::size_t>(options.replicates);
      std::vector<double> dh1(n), dh2(n);
      parallel_for(n, options.jobs, [&](std::size_t r) {
        std::vector<ChannelEvent> events{{0.0, 1, cn.bolus_size}};
        if (!baseline) events.push_back({delta, 2, cn.bolus_size});
        const ChannelSchedule schedule{std::move(events)};
        const double t_end = (baseline ? 0.0 : delta) + options.post_window;
        SsaOptions ssa_options;
        ssa_options.stride = options.sample_stride;
        ssa_options.record = false;  // only the final state matters
        const Trajectory trajectory =
            ssa_run(network, schedule.bind_to_network(network), t_end,
                    derive_seed(replicate_seed(row_seed, r), 0), ssa_options);
        const std::size_t last = trajectory.sample_count() - 1;
        dh1[r] = trajectory.value(last, h1);
        dh2[r] = trajectory.value(last, h2);
      });

      DelayPoint point;
      point.m = combo.m;
      point.removal_rate = combo.removal;
      point.delta = delta;
      point.baseline = baseline;
      point.replicates = options.replicates;
      Stat stat1, stat2, fraction;
      for (std::size_t r = 0; r < n; ++r) {
        stat1.add(dh1[r]);
        stat2.add(dh2[r]);
        const double total = dh1[r] + dh2[r];
        if (total > 0.0) fraction.add(dh1[r] / total);
      }
      point.valid = fraction.n;
      point.mean_dh1 = stat1.mean();
      point.se_dh1 = stat1.se();
      point.mean_dh2 = stat2.mean();
      point.se_dh2 = stat2.se();
      point.fraction_h1 = fraction.mean();
      point.fraction_h2 = fraction.n ? 1.0 - fraction.mean() : 0.0;
      point.fraction_se = fraction.se();
      result.points.push_back(point);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Bolus-size sweep.

BolusSweepResult sweep_bolus(const BolusSweepOptions& options) {
  const int n = options.cn.channels;
  if (n < 3) throw ConfigError("bolus sweep needs three channels");

  const double t_end = options.t_transient + options.t_window;
  const std::vector<ChannelProcess> processes = [&] {
    std::vector<ChannelProcess> p;
    p.push_back({1, PoissonProcess{options.f_correlated}});
    p.push_back({2, FollowerProcess{1, options.delta, options.sigma2}});
    p.push_back({3, PoissonProcess{options.f_free}});
    for (int c = 4; c <= n; ++c) {
      p.push_back({c, PoissonProcess{options.f_free}});
    }
    return p;
  }();

  BolusSweepResult result;
  std::size_t point_index = 0;
  for (int m : options.m_list) {
    CNConfig cn = options.cn;
    cn.chain_length = m;
    const double theta = estimate_threshold(m, cn.basic).theta;
    const NetworkSpec network = build_basic_cn(cn);
    for (double fraction : options.fractions) {
      const Count beta =
          std::max<Count>(1, std::llround(fraction * theta));
      const std::uint64_t point_seed =
          derive_seed(options.ensemble.master_seed, ++point_index);

      const auto reps = static_cast<std::size_t>(options.ensemble.replicates);
      std::vector<WeightSummary> runs(reps);
      parallel_for(reps, options.ensemble.jobs, [&](std::size_t i) {
        const std::uint64_t seed = replicate_seed(point_seed, i);
        const ChannelSchedule schedule =
            generate_schedule(processes, beta, t_end, seed);
        runs[i] = summarize_run(network, schedule, n, options.t_transient,
                                options.t_window, options.sample_stride,
                                derive_seed(seed, 0));
      });

      BolusSweepPoint point;
      point.m = m;
      point.fraction = fraction;
      point.beta = beta;
      point.replicates = options.ensemble.replicates;
      point.argmax_counts.assign(static_cast<std::size_t>(n), 0);
      std::vector<Stat> per_channel(static_cast<std::size_t>(n));
      for (const auto& run : runs) {
        for (int c = 0; c < n; ++c) {
          per_channel[static_cast<std::size_t>(c)].add(run.normalized[c]);
        }
        const auto it = std::max_element(run.mean_weights.begin(),
                                         run.mean_weights.end());
        if (*it > 0.0) {
          ++point.argmax_counts[static_cast<std::size_t>(
              it - run.mean_weights.begin())];
        }
      }
      for (const Stat& stat : per_channel) {
        point.normalized_mean.push_back(stat.mean());
        point.normalized_se.push_back(stat.se());
      }
      result.points.push_back(std::move(point));
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Index-of-dispersion sweep.

IodSweepResult sweep_iod(const IodSweepOptions& options) {
  const int n = options.cn.channels;
  if (n < 3) throw ConfigError("dispersion sweep needs at least 3 channels");

  const double t_end = options.t_transient + options.t_window;
  const std::vector<ChannelProcess> processes = [&] {
    std::vector<ChannelProcess> p;
    if (options.task == IodTask::kTc2) {
      p.push_back({1, PoissonProcess{options.frequency}});
      p.push_back({2, FollowerProcess{1, options.delta, options.sigma2}});
      for (int c = 3; c <= n; ++c) {
        p.push_back({c, PoissonProcess{options.frequency}});
      }
    } else {
      p.push_back({1, PoissonProcess{options.f_high}});
      p.push_back({2, PoissonProcess{options.f_high}});
      for (int c = 3; c <= n; ++c) {
        p.push_back({c, PoissonProcess{options.frequency}});
      }
    }
    return p;
  }();

  IodSweepResult result;
  std::size_t point_index = 0;
  for (int m : options.m_list) {
    CNConfig cn = options.cn;
    cn.chain_length = m;
    const double theta = estimate_threshold(m, cn.basic).theta;
    const NetworkSpec network = build_basic_cn(cn);
    for (double fraction : options.beta_fractions) {
      const Count beta =
          std::max<Count>(1, std::llround(fraction * theta));
      const std::uint64_t point_seed =
          derive_seed(options.ensemble.master_seed, ++point_index);

      const auto reps = static_cast<std::size_t>(options.ensemble.replicates);
      std::vector<WeightSummary> runs(reps);
      parallel_for(reps, options.ensemble.jobs, [&](std::size_t i) {
        const std::uint64_t seed = replicate_seed(point_seed, i);
        const ChannelSchedule schedule =
            generate_schedule(processes, beta, t_end, seed);
        runs[i] = summarize_run(network, schedule, n, options.t_transient,
                                options.t_window, options.sample_stride,
                                derive_seed(seed, 0));
      });

      IodSweepPoint point;
      point.m = m;
      point.fraction = fraction;
      point.beta = beta;
      Stat stat;
      for (const auto& run : runs) {
        const double total = std::accumulate(run.mean_weights.begin(),
                                             run.mean_weights.end(), 0.0);
        if (total <= 0.0) {
          ++point.invalid;
          continue;
        }
        const double iod = index_of_dispersion(run);
        point.per_replicate.push_back(iod);
        stat.add(iod);
      }
      point.iod_mean = stat.mean();
      point.iod_se = stat.se();
      point.iod_median = median_of(point.per_replicate);
      result.points.push_back(std::move(point));
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Reference detector.

MinimalDetectorResult minimal_detector_reference(
    const MinimalDetectorOptions& options) {
  const int n = static_cast<int>(options.frequencies.size());
  if (n < 1) throw ConfigError("reference detector needs channels");
  if (options.decay <= 0.0) throw ConfigError("decay must be positive");

  NetworkSpec network;
  for (int c = 1; c <= n; ++c) network.add_species(input_species(c));
  for (int c = 1; c <= n; ++c) {
    network.add_reaction({network.species_id(input_species(c))}, {},
                         options.decay);
  }

  std::vector<ChannelProcess> processes;
  for (int c = 1; c <= n; ++c) {
    const double f = options.frequencies[static_cast<std::size_t>(c - 1)];
    if (f < 0.0) {
      throw ConfigError(
          fmt::format("channel {} frequency must be >= 0, got {}", c, f));
    }
    // A silent channel simply gets no events; its steady count is 0.
    if (f > 0.0) processes.push_back({c, PoissonProcess{f}});
  }

  const double t_end = options.t_transient + options.t_window;
  const auto reps = static_cast<std::size_t>(options.ensemble.replicates);
  std::vector<std::vector<double>> means(reps);
  parallel_for(reps, options.ensemble.jobs, [&](std::size_t i) {
    const std::uint64_t seed =
        replicate_seed(options.ensemble.master_seed, i);
    const ChannelSchedule schedule =
        generate_schedule(processes, options.beta, t_end, seed);
    SsaOptions ssa_options;
    ssa_options.stride = options.sample_stride;
    const Trajectory trajectory =
        ssa_run(network, schedule.bind_to_network(network), t_end,
                derive_seed(seed, 0), ssa_options);
    means[i].reserve(static_cast<std::size_t>(n));
    for (int c = 1; c <= n; ++c) {
      means[i].push_back(trajectory.window_mean(
          trajectory.column(input_species(c)), options.t_transient, t_end));
    }
  });

  MinimalDetectorResult result;
  for (int c = 0; c < n; ++c) {
    Stat stat;
    for (const auto& run : means) stat.add(run[static_cast<std::size_t>(c)]);
    result.mean_counts.push_back(stat.mean());
    result.se.push_back(stat.se());
    result.expected.push_back(options.frequencies[static_cast<std::size_t>(c)] *
                              static_cast<double>(options.beta) /
                              options.decay);
  }
  return result;
}

// ---------------------------------------------------------------------------
// CSV emission.

void write_weights_csv(std::ostream& out, const WeightSummary& summary) {
  out << "channel,mean_H,normalized_H\n";
  for (std::size_t i = 0; i < summary.mean_weights.size(); ++i) {
    out << fmt::format("{},{},{}\n", i + 1, summary.mean_weights[i],
                       summary.normalized[i]);
  }
}

void write_ensemble_weights_csv(std::ostream& out, const TaskEnsemble& runs) {
  out << "replicate,channel,mean_H,normalized_H\n";
  for (std::size_t r = 0; r < runs.runs.size(); ++r) {
    const WeightSummary& summary = runs.runs[r];
    for (std::size_t i = 0; i < summary.mean_weights.size(); ++i) {
      out << fmt::format("{},{},{},{}\n", r, i + 1, summary.mean_weights[i],
                         summary.normalized[i]);
    }
  }
}

void write_delay_csv(std::ostream& out, const DelaySweepResult& result) {
  out << "axis,channel,value,stderr\n";
  for (const DelayPoint& point : result.points) {
    const std::string axis =
        point.baseline ? "baseline" : fmt::format("{}", point.delta);
    out << fmt::format("{},1,{},{}\n", axis, point.fraction_h1,
                       point.fraction_se);
    out << fmt::format("{},2,{},{}\n", axis, point.fraction_h2,
                       point.fraction_se);
  }
}

void write_bolus_csv(std::ostream& out, const BolusSweepResult& result) {
  out << "axis,channel,value,stderr\n";
  for (const BolusSweepPoint& point : result.points) {
    for (std::size_t c = 0; c < point.normalized_mean.size(); ++c) {
      out << fmt::format("{},{},{},{}\n", point.fraction, c + 1,
                         point.normalized_mean[c], point.normalized_se[c]);
    }
  }
}

void write_iod_csv(std::ostream& out, const IodSweepResult& result) {
  out << "axis,channel,value,stderr\n";
  for (const IodSweepPoint& point : result.points) {
    out << fmt::format("{},0,{},{}\n", point.m, point.iod_mean, point.iod_se);
  }
}

}  // namespace chemneuron
