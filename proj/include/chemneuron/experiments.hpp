#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chemneuron/cn_model.hpp"
#include "chemneuron/ssa.hpp"
#include "chemneuron/stimulus.hpp"
#include "chemneuron/trajectory.hpp"

namespace chemneuron {

/// Time-averaged per-channel weights over one steady-state window.
struct WeightSummary {
  std::vector<double> mean_weights;  // counts, channel order
  std::vector<double> normalized;    // mean/sum; all zero when sum == 0
  double window_start = 0.0;
  double window_end = 0.0;
};

/// Mean of each H{n} over [t_transient, t_transient + t_window].
/// Throws ConfigError when the trajectory does not cover the window.
WeightSummary steady_state_weights(const Trajectory& trajectory, int channels,
                                   double t_transient = 700.0,
                                   double t_window = 300.0);

/// Population standard deviation of the unnormalized means divided by
/// their mean; the discrimination measure reported by the sweep tasks.
/// Throws ConfigError when the mean is zero.
double index_of_dispersion(const WeightSummary& summary);

struct TriggerInterval {
  double start = 0.0;
  double end = 0.0;
};

/// Maximal intervals where `species` stays >= min_count for at least
/// min_duration, evaluated on the sampling grid.
std::vector<TriggerInterval> detect_trigger(const Trajectory& trajectory,
                                            std::string_view species,
                                            Count min_count = 1,
                                            double min_duration = 0.0);

/// Replicate fan-out shared by all ensemble runners. Seeds are derived per
/// replicate index, so results are independent of jobs.
struct EnsembleOptions {
  int replicates = 10;
  std::uint64_t master_seed = 1;
  int jobs = 1;
};

struct TaskEnsemble {
  std::vector<WeightSummary> runs;  // one per replicate, index order
  int successes = 0;                // runs satisfying the task predicate
};

// Default operating points; each runner's options embed the matching one.
CNConfig fb_default_config();
CNConfig tc_default_config();
CNConfig associative_default_config();
AssociativePattern associative_default_pattern();
CNConfig delay_default_config();
CNConfig bolus_default_config();
CNConfig iod_default_config();

/// Network flavor the runners operate on.
enum class CNVariant { kBasic, kBio, kHill };

NetworkSpec build_cn_variant(const CNConfig& config, CNVariant variant);

/// Child seed of replicate `index` under `master`; the runners use this
/// same derivation, so recorded seeds line up with reruns.
std::uint64_t ensemble_replicate_seed(std::uint64_t master, std::size_t index);

// ---------------------------------------------------------------------------
// Frequency-bias task: the first `biased_channels` stream faster than the
// rest; success = every fast channel out-weighs every slow one.

struct FbOptions {
  int biased_channels = 2;
  double f_high = 4.0;
  double f_low = 2.0;
  double t_transient = 700.0;
  double t_window = 300.0;
  double sample_stride = 0.25;
  CNConfig cn = fb_default_config();
  CNVariant variant = CNVariant::kBasic;
  EnsembleOptions ensemble;
};

bool fb_success(const WeightSummary& summary, int biased_channels);
TaskEnsemble run_fb(const FbOptions& options);

// ---------------------------------------------------------------------------
// Time-correlation task: channels 1..k fire as a follower chain (equal
// frequency everywhere); success = H1 > H2 > ... > Hk and every chain
// channel out-weighs every independent one.

struct TcOptions {
  int correlated_channels = 2;
  double frequency = 2.0;
  double delta = 0.02;    // inter-link lag of the follower chain
  double sigma2 = 1e-4;   // jitter variance on each link
  double t_transient = 700.0;
  double t_window = 300.0;
  double sample_stride = 0.25;
  CNConfig cn = tc_default_config();
  CNVariant variant = CNVariant::kBasic;
  EnsembleOptions ensemble;
};

bool tc_success(const WeightSummary& summary, int correlated_channels);
TaskEnsemble run_tc(const TcOptions& options);

// ---------------------------------------------------------------------------
// Associative task: channel 1 carries a high initial weight, channel 2
// none; paired stimulation must teach channel 2 to trigger on its own.

struct AssocOptions {
  CNConfig cn = associative_default_config();
  AssociativePattern pattern = associative_default_pattern();
  double probe_window = 40.0;  // trigger search window after each probe
  double pair_window = 30.0;   // per-pair weight-increment window
  Count min_trigger = 1;       // trigger = this many signal copies at once
  double sample_stride = 0.05;
  std::uint64_t seed = 1;
};

struct AssocReport {
  bool pre_trigger = false;   // probe before training fired (should not)
  bool post_trigger = false;  // probe after training fired (should)
  double dh1_per_pair = 0.0;  // mean weight increment per coincidence
  double dh2_per_pair = 0.0;
  std::vector<TriggerInterval> triggers;
  Trajectory trajectory;
};

AssocReport run_associative(const AssocOptions& options);

/// Associative run on the compartmentalized networks; the trigger is the
/// probed channel's own activated messenger.
AssocReport run_associative_variant(const AssocOptions& options,
                                    CNVariant variant);

// ---------------------------------------------------------------------------
// Delay sweep: two isolated boli, the second delta after the first, run
// briefly; the split of the resulting weight increase measures the
// coincidence window.

struct DelaySweepOptions {
  std::vector<int> m_list = {1, 5};
  std::vector<double> delta_list = {0.0,   0.0125, 0.025, 0.0375, 0.05,
                                    0.075, 0.1,    0.15,  0.2};
  /// When nonempty, sweeps B-removal rates at fixed m = m_list.front().
  std::vector<double> removal_rates;
  int replicates = 1000;
  double post_window = 0.2;  // simulated time after the second bolus
  double sample_stride = 0.01;
  bool include_baseline = true;  // rows without the second bolus
  CNConfig cn = delay_default_config();
  std::uint64_t master_seed = 1;
  int jobs = 1;
};

struct DelayPoint {
  int m = 0;
  double removal_rate = 0.0;
  double delta = 0.0;
  bool baseline = false;  // no second bolus; delta is meaningless here
  int replicates = 0;
  int valid = 0;            // replicates with any weight increase
  double fraction_h1 = 0.0;  // mean of dH1/(dH1+dH2) over valid replicates
  double fraction_h2 = 0.0;
  double fraction_se = 0.0;
  double mean_dh1 = 0.0, se_dh1 = 0.0;
  double mean_dh2 = 0.0, se_dh2 = 0.0;
};

struct DelaySweepResult {
  std::vector<DelayPoint> points;
};

DelaySweepResult sweep_delay(const DelaySweepOptions& options);

// ---------------------------------------------------------------------------
// Bolus-size sweep: correlated pair plus one faster independent channel;
// scanning the bolus size (as threshold fractions) moves the network from
// coincidence detection to plain frequency detection.

struct BolusSweepOptions {
  std::vector<int> m_list = {1, 4};
  std::vector<double> fractions = {0.25, 0.5, 1.0, 2.0};
  double f_correlated = 2.0;
  double f_free = 4.0;
  double delta = 0.0047;
  double sigma2 = 1e-4;
  double t_transient = 700.0;
  double t_window = 300.0;
  double sample_stride = 0.25;
  CNConfig cn = bolus_default_config();
  EnsembleOptions ensemble;
};

struct BolusSweepPoint {
  int m = 0;
  double fraction = 0.0;
  Count beta = 0;
  std::vector<double> normalized_mean;  // per channel, over replicates
  std::vector<double> normalized_se;
  std::vector<int> argmax_counts;  // replicates where channel n led
  int replicates = 0;
};

struct BolusSweepResult {
  std::vector<BolusSweepPoint> points;
};

BolusSweepResult sweep_bolus(const BolusSweepOptions& options);

// ---------------------------------------------------------------------------
// Index-of-dispersion sweep over the nonlinearity, with the bolus size
// tracking the per-m threshold.

enum class IodTask { kTc2, kFb2 };

struct IodSweepOptions {
  std::vector<int> m_list = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> beta_fractions = {0.5, 1.0, 2.0};
  IodTask task = IodTask::kTc2;
  double frequency = 2.0;   // base rate; FB2's fast channels use f_high
  double f_high = 4.0;
  double delta = 0.02;
  double sigma2 = 1e-4;
  double t_transient = 700.0;
  double t_window = 300.0;
  double sample_stride = 0.25;
  CNConfig cn = iod_default_config();
  EnsembleOptions ensemble;
};

struct IodSweepPoint {
  int m = 0;
  double fraction = 0.0;
  Count beta = 0;
  double iod_mean = 0.0;
  double iod_median = 0.0;
  double iod_se = 0.0;
  std::vector<double> per_replicate;  // valid replicates only
  int invalid = 0;                    // zero-weight replicates skipped
};

struct IodSweepResult {
  std::vector<IodSweepPoint> points;
};

IodSweepResult sweep_iod(const IodSweepOptions& options);

// ---------------------------------------------------------------------------
// Reference detector: independent pools that only decay, giving the
// analytic steady state f*beta/d that the learning tasks are compared
// against.

struct MinimalDetectorOptions {
  std::vector<double> frequencies = {4.0, 2.0};
  double decay = 0.1;
  Count beta = 10;
  double t_transient = 100.0;
  double t_window = 400.0;
  double sample_stride = 0.25;
  EnsembleOptions ensemble;
};

struct MinimalDetectorResult {
  std::vector<double> mean_counts;  // per channel, over replicates
  std::vector<double> se;
  std::vector<double> expected;  // f_i * beta / d
};

MinimalDetectorResult minimal_detector_reference(
    const MinimalDetectorOptions& options);

// ---------------------------------------------------------------------------
// CSV emission (schemas in docs/formats.md).

void write_weights_csv(std::ostream& out, const WeightSummary& summary);
void write_ensemble_weights_csv(std::ostream& out, const TaskEnsemble& runs);
void write_delay_csv(std::ostream& out, const DelaySweepResult& result);
void write_bolus_csv(std::ostream& out, const BolusSweepResult& result);
void write_iod_csv(std::ostream& out, const IodSweepResult& result);

}  // namespace chemneuron
