// Acceptance gate: one check per release criterion, each printed as a
// single [PASS]/[FAIL] line. The exit code is the number of failures, so
// ctest treats any red line as a failed test. Criteria that sweep long
// simulations print sub-results as indented detail lines.
//
// Usage:
//   acceptance            run everything
//   acceptance --list     print the criterion table and exit
//   acceptance --only 1,5 run a comma-separated subset
//   acceptance --fb-reduced  frequency-bias task at transient 350 /
//                            window 150 instead of 700 / 300

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "chemneuron/cn_model.hpp"
#include "chemneuron/dsl.hpp"
#include "chemneuron/errors.hpp"
#include "chemneuron/experiments.hpp"
#include "chemneuron/network.hpp"
#include "chemneuron/rng.hpp"
#include "chemneuron/ssa.hpp"
#include "chemneuron/trajectory.hpp"

namespace {

using namespace chemneuron;

struct RunFlags {
  bool fb_reduced = false;
};

struct Running {
  double sum = 0.0;
  double sumsq = 0.0;
  long n = 0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double variance() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::max(0.0, (sumsq - static_cast<double>(n) * m * m) /
                             static_cast<double>(n - 1));
  }
  double se() const {
    return n ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
  }
};

bool check(std::ostream& out, bool ok, const std::string& what) {
  if (!ok) out << "    failed: " << what << "\n";
  return ok;
}

// ---------------------------------------------------------------------------
// 1. Engine oracles: birth-death stationary mean and linear-decay ensemble
//    mean against the analytic exponential.

bool c01_ssa_oracles(std::ostream& out, const RunFlags&) {
  bool ok = true;

  {
    NetworkSpec net;
    const SpeciesId x = net.add_species("X", 0);
    net.add_reaction({}, {x}, 10.0);
    net.add_reaction({x}, {}, 1.0);

    Running final_counts;
    SsaOptions opts;
    opts.record = false;
    for (int i = 0; i < 250; ++i) {
      const Trajectory traj =
          ssa_run(net, BolusSchedule{}, 30.0, derive_seed(101, i), opts);
      final_counts.add(traj.value(traj.sample_count() - 1, 0));
    }
    const double err = std::abs(final_counts.mean() - 10.0);
    out << fmt::format("    birth-death mean {:.4f} (3se {:.4f})\n",
                       final_counts.mean(), 3.0 * final_counts.se());
    ok &= check(out, err <= 3.0 * final_counts.se(),
                "birth-death stationary mean off by more than 3 se");
  }

  {
    NetworkSpec net;
    const SpeciesId x = net.add_species("X", 1000);
    net.add_reaction({x}, {}, 0.1);

    const int seeds = 250;
    std::vector<Running> at_time(10);
    SsaOptions opts;
    opts.stride = 1.0;
    for (int i = 0; i < seeds; ++i) {
      const Trajectory traj =
          ssa_run(net, BolusSchedule{}, 10.0, derive_seed(102, i), opts);
      for (int t = 1; t <= 10; ++t) {
        at_time[static_cast<std::size_t>(t - 1)].add(traj.value(
            traj.index_at_or_before(static_cast<double>(t)), 0));
      }
    }
    for (int t = 1; t <= 10; ++t) {
      const Running& r = at_time[static_cast<std::size_t>(t - 1)];
      const double expected = 1000.0 * std::exp(-0.1 * t);
      ok &= check(out, std::abs(r.mean() - expected) <= 3.0 * r.se(),
                  fmt::format("decay mean at t={} is {:.2f}, want {:.2f} "
                              "within {:.2f}",
                              t, r.mean(), expected, 3.0 * r.se()));
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 2. Activation-chain oracle: SSA occupancy of the fully bound form of a
//    single chain against the detailed-balance equilibrium, plus the
//    effective-steepness bound.

NetworkSpec single_chain(int m, Count b_level, const BasicRates& r) {
  NetworkSpec net;
  const SpeciesId b = net.add_species("B", b_level);
  std::vector<SpeciesId> e;
  for (int i = 0; i < m; ++i) {
    e.push_back(net.add_species(fmt::format("E{}", i), i == 0 ? 1 : 0));
  }
  const SpeciesId eact = net.add_species("Eact", 0);
  for (int i = 0; i + 1 < m; ++i) {
    net.add_reversible({b, e[static_cast<std::size_t>(i)]},
                       {e[static_cast<std::size_t>(i + 1)]}, r.k_plus,
                       r.k_minus);
  }
  net.add_reversible({b, e[static_cast<std::size_t>(m - 1)]}, {eact}, r.k_plus,
                     r.k_minus_last);
  net.set_clamped(b);
  return net;
}

std::vector<Count> levels_spanning(double theta) {
  std::vector<Count> levels;
  for (const double mult : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const Count v = std::max<Count>(0, std::llround(theta * mult));
    if (std::find(levels.begin(), levels.end(), v) == levels.end()) {
      levels.push_back(v);
    }
  }
  while (levels.size() < 5) levels.push_back(levels.back() * 2 + 1);
  std::sort(levels.begin(), levels.end());
  return levels;
}

bool c02_activation_oracle(std::ostream& out, const RunFlags&) {
  bool ok = true;
  const BasicRates rates;  // stock operating point
  const double t_total = 4000.0;
  const double t_skip = 100.0;
  const int batches = 20;

  for (const int m : {1, 3, 5}) {
    const double theta = estimate_threshold(m, rates).theta;
    for (const Count level : levels_spanning(theta)) {
      const NetworkSpec net = single_chain(m, level, rates);
      SsaOptions opts;
      opts.stride = 0.05;
      const Trajectory traj = ssa_run(net, BolusSchedule{}, t_total,
                                      derive_seed(200, static_cast<std::uint64_t>(
                                                           m * 1000 + level)),
                                      opts);
      const std::size_t col = traj.column("Eact");
      const double width = (t_total - t_skip) / batches;
      Running batch_means;
      for (int k = 0; k < batches; ++k) {
        batch_means.add(
            traj.window_mean(col, t_skip + k * width, t_skip + (k + 1) * width));
      }
      const double expected =
          activation_equilibrium(m, rates, static_cast<double>(level));
      const double err = std::abs(batch_means.mean() - expected);
      const double bound = 3.0 * batch_means.se() + 1e-9;
      out << fmt::format(
          "    m={} B={:>3} occupancy {:.4f} equilibrium {:.4f} "
          "(3se {:.4f})\n",
          m, level, batch_means.mean(), expected, bound);
      ok &= check(out, err <= bound,
                  fmt::format("occupancy at m={} B={} off by more than 3 se",
                              m, level));
    }
    const double slope = effective_hill_exponent(m, rates);
    ok &= check(out, slope <= m + 1e-9,
                fmt::format("effective steepness {:.3f} exceeds m={}", slope, m));
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 3. Single-channel demonstration: one bolus into a high-weight channel
//    must produce a learning-signal interval and a positive weight change.

bool c03_single_bolus(std::ostream& out, const RunFlags&) {
  CNConfig config;
  config.channels = 1;
  config.chain_length = 5;
  config.bolus_size = 50;
  config.e_total = 3;
  config.initial_weights = {100};

  const NetworkSpec net = build_basic_cn(config);
  const BolusSchedule schedule(
      {{0.015, net.species_id(input_species(1)), config.bolus_size}});
  SsaOptions opts;
  opts.stride = 0.01;
  const Trajectory traj = ssa_run(net, schedule, 25.0, 3, opts);

  const auto triggers = detect_trigger(traj, trigger_species(), 1, 0.0);
  const double h_final =
      traj.value(traj.sample_count() - 1, traj.column(weight_species(1)));
  const double dh = h_final - 100.0;
  out << fmt::format("    triggers {} dH {:+.1f}\n", triggers.size(), dh);

  bool ok = check(out, !triggers.empty(), "no learning-signal interval");
  ok &= check(out, dh > 0.0, "weight did not increase");
  return ok;
}

// ---------------------------------------------------------------------------
// 4. Associative learning: channel 2 must stay silent before training and
//    trigger on its own after paired stimulation, with the per-pair weight
//    gain concentrated on channel 2.

bool associative_predicate(std::ostream& out,
                           const std::function<AssocReport(std::uint64_t)>& run,
                           std::uint64_t master) {
  int pre = 0;
  int post = 0;
  Running dh1;
  Running dh2;
  for (std::size_t i = 0; i < 20; ++i) {
    const AssocReport report = run(ensemble_replicate_seed(master, i));
    pre += report.pre_trigger ? 1 : 0;
    post += report.post_trigger ? 1 : 0;
    dh1.add(report.dh1_per_pair);
    dh2.add(report.dh2_per_pair);
  }
  out << fmt::format(
      "    pre {}/20 post {}/20 dH1 {:.3f} dH2 {:.3f} per pair\n", pre, post,
      dh1.mean(), dh2.mean());

  bool ok = check(out, pre <= 1, "untrained probe triggered more than once");
  ok &= check(out, post >= 18, "trained probe triggered fewer than 18 times");
  const bool ratio_ok =
      dh1.mean() > 0.0 ? dh2.mean() / dh1.mean() > 5.0 : dh2.mean() > 0.0;
  ok &= check(out, ratio_ok, "per-pair gain ratio dH2/dH1 not above 5");
  return ok;
}

bool c04_associative(std::ostream& out, const RunFlags&) {
  return associative_predicate(
      out,
      [](std::uint64_t seed) {
        AssocOptions options;
        options.seed = seed;
        return run_associative(options);
      },
      4);
}

// ---------------------------------------------------------------------------
// 5. Frequency bias: fast channels must out-weigh slow ones in at least
//    9 of 10 seeds for 2, 3 and 4 fast channels.

bool c05_frequency_bias(std::ostream& out, const RunFlags& flags) {
  bool ok = true;
  for (const int k : {2, 3, 4}) {
    FbOptions options;
    options.biased_channels = k;
    options.ensemble.replicates = 10;
    options.ensemble.master_seed = 500 + static_cast<std::uint64_t>(k);
    if (flags.fb_reduced) {
      options.t_transient = 350.0;
      options.t_window = 150.0;
    }
    const TaskEnsemble result = run_fb(options);
    out << fmt::format("    {} fast channels: {}/10\n", k, result.successes);
    ok &= check(out, result.successes >= 9,
                fmt::format("ordering held in only {}/10 seeds with {} fast "
                            "channels",
                            result.successes, k));
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 6. Time correlation: the follower chain must order by precedence and
//    dominate the independent channels in at least 8 of 10 seeds.

bool c06_time_correlation(std::ostream& out, const RunFlags&) {
  bool ok = true;
  for (const int k : {2, 3, 4}) {
    TcOptions options;
    options.correlated_channels = k;
    options.ensemble.replicates = 10;
    options.ensemble.master_seed = 600 + static_cast<std::uint64_t>(k);
    const TaskEnsemble result = run_tc(options);
    out << fmt::format("    chain length {}: {}/10\n", k, result.successes);
    ok &= check(out, result.successes >= 8,
                fmt::format("precedence held in only {}/10 seeds with chain "
                            "length {}",
                            result.successes, k));
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 7. Delay sweep: even split at zero delay; for the shallow chain the
//    first bolus wins measurably below delta 0.1; for the deep chain the
//    weight change beyond delta 0.1 matches the single-bolus baseline.

const DelayPoint* find_point(const DelaySweepResult& result, int m,
                             double delta, bool baseline) {
  for (const DelayPoint& p : result.points) {
    if (p.m == m && p.baseline == baseline &&
        (baseline || std::abs(p.delta - delta) < 1e-12)) {
      return &p;
    }
  }
  return nullptr;
}

bool c07_delay_sweep(std::ostream& out, const RunFlags&) {
  DelaySweepOptions options;
  options.master_seed = 7;
  const DelaySweepResult result = sweep_delay(options);

  bool ok = true;
  for (const int m : {1, 5}) {
    const DelayPoint* zero = find_point(result, m, 0.0, false);
    if (!check(out, zero != nullptr, fmt::format("missing m={} delta=0", m))) {
      return false;
    }
    out << fmt::format("    m={} delta=0 fraction {:.4f} ({} valid)\n", m,
                       zero->fraction_h1, zero->valid);
    ok &= check(out, std::abs(zero->fraction_h1 - 0.5) <= 0.03,
                fmt::format("m={} zero-delay fraction {:.4f} outside "
                            "0.5 +- 0.03",
                            m, zero->fraction_h1));
  }

  for (const double delta : {0.0125, 0.025, 0.0375, 0.05, 0.075}) {
    const DelayPoint* p = find_point(result, 1, delta, false);
    if (!check(out, p != nullptr, fmt::format("missing m=1 delta={}", delta))) {
      return false;
    }
    out << fmt::format("    m=1 delta={:<6} fraction {:.4f} se {:.4f}\n", delta,
                       p->fraction_h1, p->fraction_se);
    ok &= check(out, p->fraction_h1 - 0.5 >= 3.0 * p->fraction_se,
                fmt::format("m=1 delta={} fraction not above 0.5 by 3 se",
                            delta));
  }

  const DelayPoint* base = find_point(result, 5, 0.0, true);
  if (!check(out, base != nullptr, "missing m=5 baseline")) return false;
  for (const double delta : {0.15, 0.2}) {
    const DelayPoint* p = find_point(result, 5, delta, false);
    if (!check(out, p != nullptr, fmt::format("missing m=5 delta={}", delta))) {
      return false;
    }
    const double gap = std::abs(p->mean_dh1 - base->mean_dh1);
    const double bound =
        3.0 * std::hypot(p->se_dh1, base->se_dh1) + 1e-12;
    out << fmt::format(
        "    m=5 delta={:<4} dH1 {:.4f} baseline {:.4f} (3se {:.4f})\n", delta,
        p->mean_dh1, base->mean_dh1, bound);
    ok &= check(out, gap <= bound,
                fmt::format("m=5 delta={} weight change differs from the "
                            "single-bolus baseline",
                            delta));
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 8. Dispersion optimum: on the two-channel correlation task the
//    discrimination measure peaks at an interior chain length, and the
//    peak moves right as the bolus grows.

bool c08_dispersion_optimum(std::ostream& out, const RunFlags&) {
  IodSweepOptions options;
  options.ensemble.replicates = 10;
  options.ensemble.master_seed = 8;
  const IodSweepResult result = sweep_iod(options);

  std::map<double, std::vector<std::pair<int, double>>> by_fraction;
  for (const IodSweepPoint& p : result.points) {
    by_fraction[p.fraction].emplace_back(p.m, p.iod_median);
  }

  bool ok = true;
  std::vector<int> argmax_by_fraction;
  for (auto& [fraction, series] : by_fraction) {
    std::sort(series.begin(), series.end());
    int best_m = series.front().first;
    double best = series.front().second;
    for (const auto& [m, median] : series) {
      if (median > best) {
        best = median;
        best_m = m;
      }
    }
    argmax_by_fraction.push_back(best_m);
    out << fmt::format("    fraction {:<4} argmax m={} (median {:.3f})\n",
                       fraction, best_m, best);
  }

  const auto& smallest = by_fraction.begin()->second;
  const int low_m = smallest.front().first;
  const int high_m = smallest.back().first;
  ok &= check(out,
              argmax_by_fraction.front() > low_m &&
                  argmax_by_fraction.front() < high_m,
              fmt::format("smallest-bolus argmax m={} is not interior",
                          argmax_by_fraction.front()));
  ok &= check(out,
              std::is_sorted(argmax_by_fraction.begin(),
                             argmax_by_fraction.end()),
              "argmax chain length decreases as the bolus grows");
  return ok;
}

// ---------------------------------------------------------------------------
// 9. Bolus crossover: on the mixed task the correlated follower leads at
//    the small bolus and the fast independent channel leads at the large
//    bolus.

bool c09_bolus_crossover(std::ostream& out, const RunFlags&) {
  BolusSweepOptions options;
  options.m_list = {4};
  options.fractions = {0.25, 2.0};
  options.ensemble.replicates = 10;
  options.ensemble.master_seed = 9;
  const BolusSweepResult result = sweep_bolus(options);

  const BolusSweepPoint* small = nullptr;
  const BolusSweepPoint* large = nullptr;
  for (const BolusSweepPoint& p : result.points) {
    if (std::abs(p.fraction - 0.25) < 1e-12) small = &p;
    if (std::abs(p.fraction - 2.0) < 1e-12) large = &p;
  }
  bool ok = check(out, small != nullptr && large != nullptr,
                  "sweep points missing");
  if (!ok) return false;

  out << fmt::format("    fraction 0.25: channel leads {} {} {}\n",
                     small->argmax_counts[0], small->argmax_counts[1],
                     small->argmax_counts[2]);
  out << fmt::format("    fraction 2.00: channel leads {} {} {}\n",
                     large->argmax_counts[0], large->argmax_counts[1],
                     large->argmax_counts[2]);
  ok &= check(out, small->argmax_counts[1] >= 8,
              "channel 2 led fewer than 8/10 seeds at the small bolus");
  ok &= check(out, large->argmax_counts[2] >= 8,
              "channel 3 led fewer than 8/10 seeds at the large bolus");
  return ok;
}

// ---------------------------------------------------------------------------
// 10. Minimal frequency detector: decay-only pools match f*beta/d and the
//     4Hz/2Hz ratio is 2 within 5%.

bool c10_minimal_detector(std::ostream& out, const RunFlags&) {
  MinimalDetectorOptions options;
  options.ensemble.replicates = 10;
  options.ensemble.master_seed = 10;
  const MinimalDetectorResult result = minimal_detector_reference(options);

  bool ok = true;
  for (std::size_t i = 0; i < result.mean_counts.size(); ++i) {
    out << fmt::format("    channel {} mean {:.2f} expected {:.2f} se {:.3f}\n",
                       i + 1, result.mean_counts[i], result.expected[i],
                       result.se[i]);
    ok &= check(out,
                std::abs(result.mean_counts[i] - result.expected[i]) <=
                    3.0 * result.se[i],
                fmt::format("channel {} mean off by more than 3 se", i + 1));
  }
  const double ratio = result.mean_counts[0] / result.mean_counts[1];
  out << fmt::format("    ratio {:.4f}\n", ratio);
  ok &= check(out, ratio >= 1.9 && ratio <= 2.1,
              fmt::format("ratio {:.4f} outside [1.9, 2.1]", ratio));
  return ok;
}

// ---------------------------------------------------------------------------
// 11. Compartmentalized variant with the activation shortcut: associative
//     learning plus the two-channel ordering tasks at the stock
//     compartment rates and steepness 10. The shapes below (pool sizes,
//     bolus, seed weights) are the calibrated operating points; the rate
//     constants are the stock BioRates defaults throughout.

AssocOptions hill_assoc_options() {
  AssocOptions options;
  options.cn = CNConfig{};  // stock rates; only the shape is adjusted
  options.cn.channels = 2;
  options.cn.chain_length = 5;
  options.cn.bolus_size = 30;
  options.cn.e_total = 5;
  options.cn.initial_weights = {100, 0};
  return options;
}

FbOptions hill_fb_options() {
  FbOptions options;
  options.variant = CNVariant::kHill;
  options.cn = CNConfig{};
  options.cn.channels = 5;
  options.cn.chain_length = 1;
  options.cn.bolus_size = 10;
  options.cn.e_total = 40;
  options.cn.initial_weights = {50, 50, 50, 50, 50};
  options.ensemble.replicates = 10;
  options.ensemble.master_seed = 1101;
  return options;
}

TcOptions hill_tc_options() {
  TcOptions options;
  options.variant = CNVariant::kHill;
  options.cn = CNConfig{};
  options.cn.channels = 5;
  options.cn.chain_length = 5;
  options.cn.bolus_size = 10;
  options.cn.e_total = 5;
  options.cn.initial_weights = {50, 50, 50, 50, 50};
  options.ensemble.replicates = 10;
  options.ensemble.master_seed = 1102;
  return options;
}

bool c11_hill_variant(std::ostream& out, const RunFlags&) {
  out << "    associative:\n";
  bool ok = associative_predicate(
      out,
      [](std::uint64_t seed) {
        AssocOptions options = hill_assoc_options();
        options.seed = seed;
        return run_associative_variant(options, CNVariant::kHill);
      },
      1100);

  {
    const TaskEnsemble fb = run_fb(hill_fb_options());
    out << fmt::format("    frequency bias: {}/10\n", fb.successes);
    ok &= check(out, fb.successes >= 9,
                fmt::format("frequency ordering held in only {}/10 seeds",
                            fb.successes));
  }
  {
    const TaskEnsemble tc = run_tc(hill_tc_options());
    out << fmt::format("    time correlation: {}/10\n", tc.successes);
    ok &= check(out, tc.successes >= 8,
                fmt::format("precedence ordering held in only {}/10 seeds",
                            tc.successes));
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 12. Text format round-trip over generated networks plus the emitted
//     two-channel, chain-three network size.

NetworkSpec random_network(Xoshiro256& rng) {
  NetworkSpec net;
  const int n_species = 1 + static_cast<int>(rng.uniform01() * 6);
  for (int i = 0; i < n_species; ++i) {
    net.add_species("S" + std::to_string(i),
                    static_cast<Count>(rng.uniform01() * 50));
  }
  const int n_reactions = 1 + static_cast<int>(rng.uniform01() * 10);
  for (int i = 0; i < n_reactions; ++i) {
    auto side = [&](int max_len) {
      std::vector<SpeciesId> ids;
      const int len = static_cast<int>(rng.uniform01() * (max_len + 1));
      for (int k = 0; k < len; ++k) {
        ids.push_back(static_cast<SpeciesId>(rng.uniform01() * n_species));
      }
      return ids;
    };
    std::vector<SpeciesId> reactants = side(2);
    std::vector<SpeciesId> products = side(2);
    if (reactants.empty() && products.empty()) products.push_back(0);
    const double rate = std::pow(10.0, rng.uniform01() * 12.0 - 6.0);
    net.add_reaction(reactants, products, rate);
  }
  return net;
}

bool c12_dsl_roundtrip(std::ostream& out, const RunFlags&) {
  Xoshiro256 rng(777);
  int failures = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const NetworkSpec net = random_network(rng);
    const std::string text = print_network(net);
    if (print_network(parse_network(text)) != text) ++failures;
  }
  out << fmt::format("    {} round-trips, {} failures\n", trials, failures);
  bool ok = check(out, failures == 0, "round-trip broke on generated input");

  CNConfig config;
  config.channels = 2;
  config.chain_length = 3;
  const NetworkSpec cn = build_basic_cn(config);
  out << fmt::format("    emitted network: {} species, {} reactions\n",
                     cn.species_count(), cn.reaction_count());
  ok &= check(out, cn.species_count() == 15, "expected 15 species");
  ok &= check(out, cn.reaction_count() == 31, "expected 31 reactions");
  return ok;
}

// ---------------------------------------------------------------------------

struct Criterion {
  int id;
  std::string label;
  std::function<bool(std::ostream&, const RunFlags&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> table = {
      {1, "engine-oracles", c01_ssa_oracles},
      {2, "activation-oracle", c02_activation_oracle},
      {3, "single-bolus-trigger", c03_single_bolus},
      {4, "associative-learning", c04_associative},
      {5, "frequency-bias", c05_frequency_bias},
      {6, "time-correlation", c06_time_correlation},
      {7, "delay-window", c07_delay_sweep},
      {8, "dispersion-optimum", c08_dispersion_optimum},
      {9, "bolus-crossover", c09_bolus_crossover},
      {10, "minimal-detector", c10_minimal_detector},
      {11, "hill-variant-tasks", c11_hill_variant},
      {12, "dsl-roundtrip", c12_dsl_roundtrip},
  };
  return table;
}

std::optional<std::vector<int>> parse_only(const std::string& arg) {
  std::vector<int> ids;
  std::size_t pos = 0;
  while (pos < arg.size()) {
    std::size_t next = arg.find(',', pos);
    if (next == std::string::npos) next = arg.size();
    try {
      ids.push_back(std::stoi(arg.substr(pos, next - pos)));
    } catch (const std::exception&) {
      return std::nullopt;
    }
    pos = next + 1;
  }
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  RunFlags flags;
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--list") {
      for (const Criterion& c : criteria()) {
        fmt::print("{:>2}  {}\n", c.id, c.label);
      }
      return 0;
    }
    if (arg == "--fb-reduced") {
      flags.fb_reduced = true;
      continue;
    }
    if (arg == "--only" && i + 1 < argc) {
      const auto ids = parse_only(argv[++i]);
      if (!ids) {
        fmt::print(stderr, "invalid --only list\n");
        return 64;
      }
      selected = *ids;
      continue;
    }
    fmt::print(stderr, "unknown argument: {}\n", arg);
    return 64;
  }

  int failures = 0;
  for (const Criterion& c : criteria()) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string error;
    std::ostringstream detail;
    try {
      ok = c.run(detail, flags);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    fmt::print("[{}] {:>2} {:<22} ({:.1f}s)\n", ok ? "PASS" : "FAIL", c.id,
               c.label, secs);
    std::cout << detail.str();
    if (!error.empty()) fmt::print("    exception: {}\n", error);
    if (!ok) ++failures;
    std::cout.flush();
  }
  fmt::print("{} criteria failed\n", failures);
  return failures;
}
