// Command-line front end: builds networks, replays schedules, runs the
// learning tasks and parameter sweeps, and writes CSV/SVG plus a manifest
// per output directory. Exit codes: 0 ok, 1 usage, 2 config/parse error,
// 3 simulation failure.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "chemneuron/cn_model.hpp"
#include "chemneuron/dsl.hpp"
#include "chemneuron/errors.hpp"
#include "chemneuron/experiments.hpp"
#include "chemneuron/manifest.hpp"
#include "chemneuron/ode.hpp"
#include "chemneuron/rng.hpp"
#include "chemneuron/ssa.hpp"
#include "chemneuron/stimulus.hpp"
#include "chemneuron/svg.hpp"
#include "chemneuron/trajectory.hpp"
#include "chemneuron/version.hpp"

namespace cn = chemneuron;
namespace fs = std::filesystem;

namespace {

struct GlobalArgs {
  std::uint64_t seed = 1;
  std::string out = "out";
  std::string config_file;
  int replicates = 10;
  int jobs = 1;
  bool svg = false;
};

// Model knobs shared by most subcommands. Only explicitly given flags
// override the task's default configuration (or the config file).
struct ModelFlags {
  std::optional<int> channels;
  std::optional<int> chain_length;
  std::optional<long long> bolus_size;
  std::optional<long long> e_total;
  std::optional<long long> gene_copies;
  std::optional<std::string> weights;      // comma list of H_n(0)
  std::vector<std::string> basic_rates;    // name=value entries
  std::vector<std::string> bio_rates;
};

const std::map<std::string, double cn::BasicRates::*>& basic_rate_fields() {
  static const std::map<std::string, double cn::BasicRates::*> fields = {
      {"k_IA", &cn::BasicRates::k_IA},
      {"k_AB", &cn::BasicRates::k_AB},
      {"k_BA", &cn::BasicRates::k_BA},
      {"k_plus", &cn::BasicRates::k_plus},
      {"k_minus", &cn::BasicRates::k_minus},
      {"k_minus_last", &cn::BasicRates::k_minus_last},
      {"k_AE", &cn::BasicRates::k_AE},
      {"k_EA", &cn::BasicRates::k_EA},
      {"k_EH", &cn::BasicRates::k_EH},
      {"k_HE", &cn::BasicRates::k_HE},
      {"k_AH", &cn::BasicRates::k_AH},
      {"k_HA", &cn::BasicRates::k_HA},
      {"k_HB", &cn::BasicRates::k_HB},
      {"k_BH", &cn::BasicRates::k_BH},
      {"k_H_decay", &cn::BasicRates::k_H_decay},
      {"k_B_decay", &cn::BasicRates::k_B_decay},
  };
  return fields;
}

const std::map<std::string, double cn::BioRates::*>& bio_rate_fields() {
  static const std::map<std::string, double cn::BioRates::*> fields = {
      {"k_IA", &cn::BioRates::k_IA},
      {"k_AI", &cn::BioRates::k_AI},
      {"k_plus", &cn::BioRates::k_plus},
      {"k_minus", &cn::BioRates::k_minus},
      {"k_minus_last", &cn::BioRates::k_minus_last},
      {"k_AE", &cn::BioRates::k_AE},
      {"k_EA", &cn::BioRates::k_EA},
      {"k_AstarE", &cn::BioRates::k_AstarE},
      {"k_EAstar", &cn::BioRates::k_EAstar},
      {"k_AstarA", &cn::BioRates::k_AstarA},
      {"k_AAstar", &cn::BioRates::k_AAstar},
      {"k_Astarh", &cn::BioRates::k_Astarh},
      {"k_hAstar", &cn::BioRates::k_hAstar},
      {"k_leak", &cn::BioRates::k_leak},
      {"k_h", &cn::BioRates::k_h},
      {"k_AH", &cn::BioRates::k_AH},
      {"k_HA", &cn::BioRates::k_HA},
      {"k_HB", &cn::BioRates::k_HB},
      {"k_BH", &cn::BioRates::k_BH},
      {"k_H_decay", &cn::BioRates::k_H_decay},
      {"k_B_decay", &cn::BioRates::k_B_decay},
      {"hill_exponent", &cn::BioRates::hill_exponent},
  };
  return fields;
}

long long parse_integer(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw cn::ConfigError(fmt::format("{}: expected an integer, got '{}'",
                                      where, text));
  }
}

double parse_real(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw cn::ConfigError(
        fmt::format("{}: expected a number, got '{}'", where, text));
  }
}

std::vector<cn::Count> parse_weight_list(const std::string& text,
                                         const std::string& where) {
  std::vector<cn::Count> weights;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    weights.push_back(parse_integer(item, where));
  }
  return weights;
}

void apply_rate(cn::BasicRates& rates, const std::string& entry,
                const std::string& where) {
  const auto eq = entry.find('=');
  if (eq == std::string::npos) {
    throw cn::ConfigError(
        fmt::format("{}: rate overrides use name=value, got '{}'", where,
                    entry));
  }
  const std::string name = entry.substr(0, eq);
  const auto& fields = basic_rate_fields();
  const auto it = fields.find(name);
  if (it == fields.end()) {
    throw cn::ConfigError(fmt::format("{}: unknown rate '{}'", where, name));
  }
  rates.*(it->second) = parse_real(entry.substr(eq + 1), where);
}

void apply_bio_rate(cn::BioRates& rates, const std::string& entry,
                    const std::string& where) {
  const auto eq = entry.find('=');
  if (eq == std::string::npos) {
    throw cn::ConfigError(
        fmt::format("{}: rate overrides use name=value, got '{}'", where,
                    entry));
  }
  const std::string name = entry.substr(0, eq);
  const auto& fields = bio_rate_fields();
  const auto it = fields.find(name);
  if (it == fields.end()) {
    throw cn::ConfigError(fmt::format("{}: unknown rate '{}'", where, name));
  }
  rates.*(it->second) = parse_real(entry.substr(eq + 1), where);
}

/// Flat key/value config file: `key = value`, '#' comments. Keys mirror
/// the model configuration; rate entries are prefixed with `basic.` or
/// `bio.`. Command-line flags override file values.
void apply_config_file(const std::string& path, cn::CNConfig& config) {
  std::ifstream in(path);
  if (!in) throw cn::ConfigError(fmt::format("cannot open config {}", path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = fmt::format("{}:{}", path, line_no);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw cn::ConfigError(fmt::format("{}: expected key = value", where));
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string()
                                    : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "channels") {
      config.channels = static_cast<int>(parse_integer(value, where));
    } else if (key == "chain_length") {
      config.chain_length = static_cast<int>(parse_integer(value, where));
    } else if (key == "bolus_size") {
      config.bolus_size = parse_integer(value, where);
    } else if (key == "e_total") {
      config.e_total = parse_integer(value, where);
    } else if (key == "gene_copies") {
      config.gene_copies = parse_integer(value, where);
    } else if (key == "initial_weights") {
      config.initial_weights = parse_weight_list(value, where);
    } else if (key.rfind("basic.", 0) == 0) {
      apply_rate(config.basic, key.substr(6) + "=" + value, where);
    } else if (key.rfind("bio.", 0) == 0) {
      apply_bio_rate(config.bio, key.substr(4) + "=" + value, where);
    } else {
      throw cn::ConfigError(fmt::format("{}: unknown key '{}'", where, key));
    }
  }
}

void add_model_flags(CLI::App* sub, ModelFlags& flags) {
  sub->add_option("--channels", flags.channels, "input channel count N");
  sub->add_option("--m,--chain-length", flags.chain_length,
                  "activation chain length m");
  sub->add_option("--beta,--bolus-size", flags.bolus_size,
                  "precursor copies per stimulus event");
  sub->add_option("--e-total", flags.e_total, "chain molecules per pool");
  sub->add_option("--gene-copies", flags.gene_copies,
                  "gene copies per compartment (bio variants)");
  sub->add_option("--weights", flags.weights,
                  "initial weights H_n(0), comma separated");
  sub->add_option("--rate", flags.basic_rates,
                  "basic-network rate override name=value (repeatable)");
  sub->add_option("--bio-rate", flags.bio_rates,
                  "bio-network rate override name=value (repeatable)");
}

void apply_model_flags(const GlobalArgs& global, const ModelFlags& flags,
                       cn::CNConfig& config) {
  if (!global.config_file.empty()) {
    apply_config_file(global.config_file, config);
  }
  if (flags.channels) config.channels = *flags.channels;
  if (flags.chain_length) config.chain_length = *flags.chain_length;
  if (flags.bolus_size) config.bolus_size = *flags.bolus_size;
  if (flags.e_total) config.e_total = *flags.e_total;
  if (flags.gene_copies) config.gene_copies = *flags.gene_copies;
  if (flags.weights) {
    config.initial_weights = parse_weight_list(*flags.weights, "--weights");
  }
  for (const auto& entry : flags.basic_rates) {
    apply_rate(config.basic, entry, "--rate");
  }
  for (const auto& entry : flags.bio_rates) {
    apply_bio_rate(config.bio, entry, "--bio-rate");
  }
}

cn::CNVariant parse_variant(const std::string& name) {
  if (name == "basic") return cn::CNVariant::kBasic;
  if (name == "bio") return cn::CNVariant::kBio;
  if (name == "hill") return cn::CNVariant::kHill;
  throw cn::ConfigError(fmt::format("unknown variant '{}'", name));
}

/// Single collector for output files; also fills the manifest's outputs
/// list so reruns know what to expect.
class OutputDir {
 public:
  OutputDir(std::string dir, cn::RunManifest& manifest)
      : dir_(std::move(dir)), manifest_(manifest) {}

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(dir_);
    const fs::path path = fs::path(dir_) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw cn::ConfigError(fmt::format("cannot write {}", path.string()));
    }
    out << content;
    manifest_.outputs.push_back(name);
  }

  void finish(cn::RunManifest& manifest) {
    fs::create_directories(dir_);
    const fs::path path = fs::path(dir_) / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw cn::ConfigError(fmt::format("cannot write {}", path.string()));
    }
    out << manifest.to_json();
  }

 private:
  std::string dir_;
  cn::RunManifest& manifest_;
};

std::string csv_of_trajectory(const cn::Trajectory& trajectory) {
  std::ostringstream out;
  trajectory.write_csv(out);
  return out.str();
}

std::string csv_of_schedule(const cn::ChannelSchedule& schedule) {
  std::ostringstream out;
  schedule.write_csv(out);
  return out.str();
}

cn::RunManifest start_manifest(int argc, char** argv,
                               const GlobalArgs& global) {
  cn::RunManifest manifest;
  for (int i = 0; i < argc; ++i) {
    if (i) manifest.command += ' ';
    manifest.command += argv[i];
  }
  manifest.tool_version = cn::kVersion;
  manifest.master_seed = global.seed;
  return manifest;
}

void record_cn(cn::RunManifest& manifest, const cn::CNConfig& config) {
  auto& p = manifest.parameters;
  p["channels"] = fmt::format("{}", config.channels);
  p["chain_length"] = fmt::format("{}", config.chain_length);
  p["bolus_size"] = fmt::format("{}", config.bolus_size);
  p["e_total"] = fmt::format("{}", config.e_total);
  p["gene_copies"] = fmt::format("{}", config.gene_copies);
  std::string weights;
  for (std::size_t i = 0; i < config.initial_weights.size(); ++i) {
    if (i) weights += ',';
    weights += fmt::format("{}", config.initial_weights[i]);
  }
  p["initial_weights"] = weights;
  for (const auto& [name, member] : basic_rate_fields()) {
    p["basic." + name] = fmt::format("{}", config.basic.*member);
  }
  for (const auto& [name, member] : bio_rate_fields()) {
    p["bio." + name] = fmt::format("{}", config.bio.*member);
  }
}

void record_ensemble_seeds(cn::RunManifest& manifest, std::uint64_t master,
                           int replicates) {
  for (int i = 0; i < replicates; ++i) {
    manifest.derived_seeds.push_back(
        cn::ensemble_replicate_seed(master, static_cast<std::size_t>(i)));
  }
}

std::string ensemble_weights_csv(const cn::TaskEnsemble& ensemble) {
  std::ostringstream out;
  cn::write_ensemble_weights_csv(out, ensemble);
  return out.str();
}

std::string weights_bar_svg(const std::string& title,
                            const cn::TaskEnsemble& ensemble) {
  if (ensemble.runs.empty()) return cn::bar_chart(title, "mean H", {}, {});
  const std::size_t channels = ensemble.runs.front().mean_weights.size();
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < channels; ++c) {
    labels.push_back(cn::weight_species(static_cast<int>(c) + 1));
  }
  cn::SvgBarGroup group;
  group.label = "mean over replicates";
  group.values.assign(channels, 0.0);
  for (const auto& run : ensemble.runs) {
    for (std::size_t c = 0; c < channels; ++c) {
      group.values[c] += run.mean_weights[c] / ensemble.runs.size();
    }
  }
  return cn::bar_chart(title, "mean H", labels, {group});
}

// ---------------------------------------------------------------------------
// Subcommand handlers.

struct SimulateArgs {
  std::string network_file;
  std::string schedule_file;
  double t_end = 10.0;
  double stride = 0.1;
  bool ode = false;
  double rtol = 1e-8;
  double atol = 1e-10;
};

void run_simulate(int argc, char** argv, const GlobalArgs& global,
                  const SimulateArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ifstream in(args.network_file);
  if (!in) {
    throw cn::ConfigError(
        fmt::format("cannot open network {}", args.network_file));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  cn::NetworkSpec network;
  try {
    network = cn::parse_network(buffer.str());
  } catch (const cn::ParseError& e) {
    throw cn::ConfigError(fmt::format("{}:{}:{}: {}", args.network_file,
                                      e.line(), e.column(), e.what()));
  }

  cn::ChannelSchedule schedule;
  if (!args.schedule_file.empty()) {
    std::ifstream sched_in(args.schedule_file);
    if (!sched_in) {
      throw cn::ConfigError(
          fmt::format("cannot open schedule {}", args.schedule_file));
    }
    std::stringstream sched_buffer;
    sched_buffer << sched_in.rdbuf();
    try {
      schedule = cn::ChannelSchedule::read_csv(sched_buffer.str());
    } catch (const cn::ParseError& e) {
      throw cn::ConfigError(fmt::format("{}:{}: {}", args.schedule_file,
                                        e.line(), e.what()));
    }
  }

  cn::Trajectory trajectory;
  if (args.ode) {
    cn::OdeOptions options;
    options.stride = args.stride;
    options.rtol = args.rtol;
    options.atol = args.atol;
    trajectory = cn::ode_run(network, schedule.bind_to_network(network),
                             args.t_end, options);
  } else {
    cn::SsaOptions options;
    options.stride = args.stride;
    trajectory = cn::ssa_run(network, schedule.bind_to_network(network),
                             args.t_end, global.seed, options);
  }

  cn::RunManifest manifest = start_manifest(argc, argv, global);
  manifest.parameters["network"] = args.network_file;
  manifest.parameters["schedule"] = args.schedule_file;
  manifest.parameters["t_end"] = fmt::format("{}", args.t_end);
  manifest.parameters["stride"] = fmt::format("{}", args.stride);
  manifest.parameters["integrator"] = args.ode ? "ode" : "ssa";

  OutputDir out(global.out, manifest);
  out.write("trajectory.csv", csv_of_trajectory(trajectory));
  if (global.svg) {
    std::vector<cn::SvgSeries> series;
    for (std::size_t s = 0; s < trajectory.species_names().size(); ++s) {
      cn::SvgSeries line;
      line.label = trajectory.species_names()[s];
      line.x = trajectory.times();
      for (std::size_t i = 0; i < trajectory.sample_count(); ++i) {
        line.y.push_back(trajectory.value(i, s));
      }
      series.push_back(std::move(line));
    }
    out.write("trajectory.svg",
              cn::line_chart("simulate", "time", "count", series));
  }
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  out.finish(manifest);
}

struct EmitArgs {
  std::string variant = "basic";
  int channels = 1;
  int chain_length = 1;
};

void run_emit(const GlobalArgs& global, const EmitArgs& args,
              const ModelFlags& flags) {
  cn::CNConfig config;
  config.channels = args.channels;
  config.chain_length = args.chain_length;
  apply_model_flags(global, flags, config);
  // --n/--m are the canonical emit knobs; model flags may still override.
  if (!flags.channels) config.channels = args.channels;
  if (!flags.chain_length) config.chain_length = args.chain_length;
  const cn::CNVariant variant = parse_variant(args.variant);
  if (variant == cn::CNVariant::kHill) {
    throw cn::ConfigError(
        "the hill variant has state-modulated reactions with no text form; "
        "emit supports basic and bio");
  }
  std::cout << cn::print_network(cn::build_cn_variant(config, variant));
}

struct AssocArgs {
  std::string variant = "basic";
  int coincidences = 5;
  double pair_spacing = 50.0;
  double probe_window = 40.0;
  double pair_window = 30.0;
  long long min_trigger = 1;
  double stride = 0.05;
};

void run_assoc(int argc, char** argv, const GlobalArgs& global,
               const AssocArgs& args, const ModelFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  cn::AssocOptions options;
  apply_model_flags(global, flags, options.cn);
  options.pattern.coincidences = args.coincidences;
  options.pattern.pair_spacing = args.pair_spacing;
  options.pattern.beta = options.cn.bolus_size;
  options.probe_window = args.probe_window;
  options.pair_window = args.pair_window;
  options.min_trigger = args.min_trigger;
  options.sample_stride = args.stride;
  const cn::CNVariant variant = parse_variant(args.variant);

  cn::RunManifest manifest = start_manifest(argc, argv, global);
  record_cn(manifest, options.cn);
  manifest.parameters["variant"] = args.variant;
  manifest.parameters["coincidences"] = fmt::format("{}", args.coincidences);
  manifest.parameters["replicates"] = fmt::format("{}", global.replicates);
  record_ensemble_seeds(manifest, global.seed, global.replicates);

  std::ostringstream summary;
  summary << "replicate,pre_trigger,post_trigger,dh1_per_pair,dh2_per_pair\n";
  int pre_count = 0;
  int post_count = 0;
  double dh1 = 0.0;
  double dh2 = 0.0;
  std::optional<cn::AssocReport> first;
  for (int r = 0; r < global.replicates; ++r) {
    cn::AssocOptions seeded = options;
    seeded.seed = cn::ensemble_replicate_seed(global.seed,
                                              static_cast<std::size_t>(r));
    cn::AssocReport report = cn::run_associative_variant(seeded, variant);
    pre_count += report.pre_trigger ? 1 : 0;
    post_count += report.post_trigger ? 1 : 0;
    dh1 += report.dh1_per_pair;
    dh2 += report.dh2_per_pair;
    summary << fmt::format("{},{},{},{},{}\n", r, report.pre_trigger ? 1 : 0,
                           report.post_trigger ? 1 : 0, report.dh1_per_pair,
                           report.dh2_per_pair);
    if (!first) first = std::move(report);
  }
  manifest.parameters["pre_triggers"] = fmt::format("{}", pre_count);
  manifest.parameters["post_triggers"] = fmt::format("{}", post_count);
  if (global.replicates > 0) {
    dh1 /= global.replicates;
    dh2 /= global.replicates;
  }
  manifest.parameters["mean_dh1_per_pair"] = fmt::format("{}", dh1);
  manifest.parameters["mean_dh2_per_pair"] = fmt::format("{}", dh2);

  OutputDir out(global.out, manifest);
  out.write("assoc.csv", summary.str());
  if (first) {
    out.write("trajectory.csv", csv_of_trajectory(first->trajectory));
    if (global.svg) {
      const cn::Trajectory& tr = first->trajectory;
      std::vector<cn::SvgSeries> series;
      for (const std::string& name :
           {cn::weight_species(1), cn::weight_species(2)}) {
        cn::SvgSeries line;
        line.label = name;
        line.x = tr.times();
        const std::size_t col = tr.column(name);
        for (std::size_t i = 0; i < tr.sample_count(); ++i) {
          line.y.push_back(tr.value(i, col));
        }
        series.push_back(std::move(line));
      }
      out.write("weights.svg",
                cn::line_chart("associative run", "time", "count", series));
    }
  }
  std::cout << fmt::format(
      "assoc: pre triggers {}/{}, post triggers {}/{}, dH2/pair {:.3g} vs "
      "dH1/pair {:.3g}\n",
      pre_count, global.replicates, post_count, global.replicates, dh2, dh1);
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  out.finish(manifest);
}

struct TaskArgs {
  int k = 2;
  std::string variant = "basic";
  double f_high = 4.0;
  double f_low = 2.0;
  double frequency = 2.0;
  double delta = 0.02;
  double sigma2 = 1e-4;
  double t_transient = 700.0;
  double t_window = 300.0;
  double stride = 0.25;
};

void run_fb_cmd(int argc, char** argv, const GlobalArgs& global,
                const TaskArgs& args, const ModelFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  cn::FbOptions options;
  apply_model_flags(global, flags, options.cn);
  options.biased_channels = args.k;
  options.f_high = args.f_high;
  options.f_low = args.f_low;
  options.t_transient = args.t_transient;
  options.t_window = args.t_window;
  options.sample_stride = args.stride;
  options.variant = parse_variant(args.variant);
  options.ensemble.replicates = global.replicates;
  options.ensemble.master_seed = global.seed;
  options.ensemble.jobs = global.jobs;

  const cn::TaskEnsemble ensemble = cn::run_fb(options);

  cn::RunManifest manifest = start_manifest(argc, argv, global);
  record_cn(manifest, options.cn);
  manifest.parameters["task"] = fmt::format("fb{}", args.k);
  manifest.parameters["variant"] = args.variant;
  manifest.parameters["f_high"] = fmt::format("{}", args.f_high);
  manifest.parameters["f_low"] = fmt::format("{}", args.f_low);
  manifest.parameters["t_transient"] = fmt::format("{}", args.t_transient);
  manifest.parameters["t_window"] = fmt::format("{}", args.t_window);
  manifest.parameters["replicates"] = fmt::format("{}", global.replicates);
  manifest.parameters["successes"] = fmt::format("{}", ensemble.successes);
  record_ensemble_seeds(manifest, global.seed, global.replicates);

  OutputDir out(global.out, manifest);
  out.write("weights.csv", ensemble_weights_csv(ensemble));
  if (global.svg) {
    out.write("weights.svg",
              weights_bar_svg(fmt::format("fb {}", args.k), ensemble));
  }
  std::cout << fmt::format("fb k={}: {}/{} replicates ordered\n", args.k,
                           ensemble.successes, global.replicates);
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  out.finish(manifest);
}

void run_tc_cmd(int argc, char** argv, const GlobalArgs& global,
                const TaskArgs& args, const ModelFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  cn::TcOptions options;
  apply_model_flags(global, flags, options.cn);
  options.correlated_channels = args.k;
  options.frequency = args.frequency;
  options.delta = args.delta;
  options.sigma2 = args.sigma2;
  options.t_transient = args.t_transient;
  options.t_window = args.t_window;
  options.sample_stride = args.stride;
  options.variant = parse_variant(args.variant);
  options.ensemble.replicates = global.replicates;
  options.ensemble.master_seed = global.seed;
  options.ensemble.jobs = global.jobs;

  const cn::TaskEnsemble ensemble = cn::run_tc(options);

  cn::RunManifest manifest = start_manifest(argc, argv, global);
  record_cn(manifest, options.cn);
  manifest.parameters["task"] = fmt::format("tc{}", args.k);
  manifest.parameters["variant"] = args.variant;
  manifest.parameters["frequency"] = fmt::format("{}", args.frequency);
  manifest.parameters["delta"] = fmt::format("{}", args.delta);
  manifest.parameters["sigma2"] = fmt::format("{}", args.sigma2);
  manifest.parameters["t_transient"] = fmt::format("{}", args.t_transient);
  manifest.parameters["t_window"] = fmt::format("{}", args.t_window);
  manifest.parameters["replicates"] = fmt::format("{}", global.replicates);
  manifest.parameters["successes"] = fmt::format("{}", ensemble.successes);
  record_ensemble_seeds(manifest, global.seed, global.replicates);

  OutputDir out(global.out, manifest);
  out.write("weights.csv", ensemble_weights_csv(ensemble));
  if (global.svg) {
    out.write("weights.svg",
              weights_bar_svg(fmt::format("tc {}", args.k), ensemble));
  }
  std::cout << fmt::format("tc k={}: {}/{} replicates ordered\n", args.k,
                           ensemble.successes, global.replicates);
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  out.finish(manifest);
}

struct SweepBolusArgs {
  std::vector<int> m_list = {1, 4};
  std::vector<double> fractions = {0.25, 0.5, 1.0, 2.0};
  double delta = 0.0047;
  double sigma2 = 1e-4;
  double f_correlated = 2.0;
  double f_free = 4.0;
  double t_transient = 700.0;
  double t_window = 300.0;
};

void run_sweep_bolus(int argc, char** argv, const GlobalArgs& global,
                     const SweepBolusArgs& args, const ModelFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  cn::BolusSweepOptions options;
  apply_model_flags(global, flags, options.cn);
  options.m_list = args.m_list;
  options.fractions = args.fractions;
  options.delta = args.delta;
  options.sigma2 = args.sigma2;
  options.f_correlated = args.f_correlated;
  options.f_free = args.f_free;
  options.t_transient = args.t_transient;
  options.t_window = args.t_window;
  options.ensemble.replicates = global.replicates;
  options.ensemble.master_seed = global.seed;
  options.ensemble.jobs = global.jobs;

  const cn::BolusSweepResult result = cn::sweep_bolus(options);

  cn::RunManifest manifest = start_manifest(argc, argv, global);
  record_cn(manifest, options.cn);
  manifest.parameters["delta"] = fmt::format("{}", args.delta);
  manifest.parameters["replicates"] = fmt::format("{}", global.replicates);

  OutputDir out(global.out, manifest);
  for (int m : args.m_list) {
    cn::BolusSweepResult group;
    for (const auto& point : result.points) {
      if (point.m == m) group.points.push_back(point);
    }
    std::ostringstream csv;
    cn::write_bolus_csv(csv, group);
    out.write(fmt::format("bolus_m{}.csv", m), csv.str());
    if (global.svg) {
      std::vector<cn::SvgSeries> series(
          static_cast<std::size_t>(options.cn.channels));
      for (std::size_t c = 0; c < series.size(); ++c) {
        series[c].label = cn::weight_species(static_cast<int>(c) + 1);
      }
      for (const auto& point : group.points) {
        for (std::size_t c = 0; c < series.size(); ++c) {
          series[c].x.push_back(point.fraction);
          series[c].y.push_back(point.normalized_mean[c]);
          series[c].yerr.push_back(point.normalized_se[c]);
        }
      }
      out.write(fmt::format("bolus_m{}.svg", m),
                cn::line_chart(fmt::format("bolus sweep, m={}", m),
                               "bolus size / threshold", "normalized H",
                               series));
    }
  }
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  out.finish(manifest);
}

struct SweepDelayArgs {
  std::vector<int> m_list = {1, 5};
  std::vector<double> deltas = {0.0,   0.0125, 0.025, 0.0375, 0.05,
                                0.075, 0.1,    0.15,  0.2};
  std::vector<double> removal_rates;
  double post_window = 0.2;
  bool no_baseline = false;
};

void run_sweep_delay(int argc, char** argv, const GlobalArgs& global,
                     const SweepDelayArgs& args, const ModelFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  cn::DelaySweepOptions options;
  apply_model_flags(global, flags, options.cn);
  options.m_list = args.m_list;
  options.delta_list = args.deltas;
  options.removal_rates = args.removal_rates;
  options.post_window = args.post_window;
  options.include_baseline = !args.no_baseline;
  options.replicates = global.replicates;
  options.master_seed = global.seed;
  options.jobs = global.jobs;

  const cn::DelaySweepResult result = cn::sweep_delay(options);

  cn::RunManifest manifest = start_manifest(argc, argv, global);
  record_cn(manifest, options.cn);
  manifest.parameters["replicates"] = fmt::format("{}", global.replicates);
  manifest.parameters["post_window"] = fmt::format("{}", args.post_window);

  OutputDir out(global.out, manifest);
  auto group_name = [&](const cn::DelayPoint& point) {
    return args.removal_rates.empty()
               ? fmt::format("m{}", point.m)
               : fmt::format("r{}", point.removal_rate);
  };
  std::vector<std::string> groups;
  for (const auto& point : result.points) {
    const std::string name = group_name(point);
    if (std::find(groups.begin(), groups.end(), name) == groups.end()) {
      groups.push_back(name);
    }
  }
  for (const std::string& name : groups) {
    cn::DelaySweepResult group;
    for (const auto& point : result.points) {
      if (group_name(point) == name) group.points.push_back(point);
    }
    std::ostringstream csv;
    cn::write_delay_csv(csv, group);
    out.write(fmt::format("delay_{}.csv", name), csv.str());
    if (global.svg) {
      cn::SvgSeries f1;
      f1.label = "first-bolus share";
      for (const auto& point : group.points) {
        if (point.baseline) continue;
        f1.x.push_back(point.delta);
        f1.y.push_back(point.fraction_h1);
        f1.yerr.push_back(point.fraction_se);
      }
      out.write(fmt::format("delay_{}.svg", name),
                cn::line_chart(fmt::format("delay sweep, {}", name), "delay",
                               "fraction of weight gain", {f1}));
    }
  }
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  out.finish(manifest);
}

struct SweepIodArgs {
  std::vector<int> m_list = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> fractions = {0.5, 1.0, 2.0};
  std::string task = "tc2";
  double frequency = 2.0;
  double f_high = 4.0;
  double delta = 0.02;
  double sigma2 = 1e-4;
  double t_transient = 700.0;
  double t_window = 300.0;
};

void run_sweep_iod(int argc, char** argv, const GlobalArgs& global,
                   const SweepIodArgs& args, const ModelFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  cn::IodSweepOptions options;
  apply_model_flags(global, flags, options.cn);
  options.m_list = args.m_list;
  options.beta_fractions = args.fractions;
  options.task = args.task == "fb2" ? cn::IodTask::kFb2 : cn::IodTask::kTc2;
  options.frequency = args.frequency;
  options.f_high = args.f_high;
  options.delta = args.delta;
  options.sigma2 = args.sigma2;
  options.t_transient = args.t_transient;
  options.t_window = args.t_window;
  options.ensemble.replicates = global.replicates;
  options.ensemble.master_seed = global.seed;
  options.ensemble.jobs = global.jobs;

  const cn::IodSweepResult result = cn::sweep_iod(options);

  cn::RunManifest manifest = start_manifest(argc, argv, global);
  record_cn(manifest, options.cn);
  manifest.parameters["task"] = args.task;
  manifest.parameters["replicates"] = fmt::format("{}", global.replicates);

  OutputDir out(global.out, manifest);
  std::vector<cn::SvgSeries> series;
  for (double fraction : args.fractions) {
    cn::IodSweepResult group;
    for (const auto& point : result.points) {
      if (point.fraction == fraction) group.points.push_back(point);
    }
    std::ostringstream csv;
    cn::write_iod_csv(csv, group);
    out.write(fmt::format("iod_f{}.csv", fraction), csv.str());
    if (global.svg) {
      cn::SvgSeries line;
      line.label = fmt::format("beta = {} theta", fraction);
      for (const auto& point : group.points) {
        line.x.push_back(point.m);
        line.y.push_back(point.iod_mean);
        line.yerr.push_back(point.iod_se);
      }
      series.push_back(std::move(line));
    }
  }
  if (global.svg) {
    out.write("iod.svg", cn::line_chart("discrimination vs nonlinearity",
                                        "chain length m",
                                        "index of dispersion", series));
  }
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  out.finish(manifest);
}

struct BioArgs {
  std::string variant = "hill";
  int k = 2;
  double t_transient = 700.0;
  double t_window = 300.0;
  double delta = 0.02;
  double sigma2 = 1e-4;
};

void run_bio(int argc, char** argv, const GlobalArgs& global,
             const BioArgs& args, const ModelFlags& flags) {
  const auto t0 = std::chrono::steady_clock::now();
  const cn::CNVariant variant = parse_variant(args.variant);
  if (variant == cn::CNVariant::kBasic) {
    throw cn::ConfigError("bio expects --variant bio or hill");
  }

  cn::RunManifest manifest = start_manifest(argc, argv, global);
  manifest.parameters["variant"] = args.variant;
  manifest.parameters["replicates"] = fmt::format("{}", global.replicates);
  OutputDir out(global.out, manifest);
  std::ostringstream summary;
  summary << "check,value\n";

  // Associative block.
  {
    cn::AssocOptions options;
    apply_model_flags(global, flags, options.cn);
    options.pattern.beta = options.cn.bolus_size;
    int pre = 0;
    int post = 0;
    double dh1 = 0.0;
    double dh2 = 0.0;
    for (int r = 0; r < global.replicates; ++r) {
      cn::AssocOptions seeded = options;
      seeded.seed = cn::ensemble_replicate_seed(global.seed,
                                                static_cast<std::size_t>(r));
      const cn::AssocReport report =
          cn::run_associative_variant(seeded, variant);
      pre += report.pre_trigger ? 1 : 0;
      post += report.post_trigger ? 1 : 0;
      dh1 += report.dh1_per_pair;
      dh2 += report.dh2_per_pair;
    }
    summary << fmt::format("assoc_pre_triggers,{}\n", pre);
    summary << fmt::format("assoc_post_triggers,{}\n", post);
    if (global.replicates > 0) {
      dh1 /= global.replicates;
      dh2 /= global.replicates;
    }
    summary << fmt::format("assoc_dh1_per_pair,{}\n", dh1);
    summary << fmt::format("assoc_dh2_per_pair,{}\n", dh2);
    std::cout << fmt::format("bio assoc: pre {}/{}, post {}/{}\n", pre,
                             global.replicates, post, global.replicates);
  }

  // Frequency-bias block.
  {
    cn::FbOptions options;
    apply_model_flags(global, flags, options.cn);
    options.biased_channels = args.k;
    options.variant = variant;
    options.t_transient = args.t_transient;
    options.t_window = args.t_window;
    options.ensemble.replicates = global.replicates;
    options.ensemble.master_seed = cn::derive_seed(global.seed, 101);
    options.ensemble.jobs = global.jobs;
    const cn::TaskEnsemble ensemble = cn::run_fb(options);
    summary << fmt::format("fb{}_successes,{}\n", args.k, ensemble.successes);
    out.write("fb_weights.csv", ensemble_weights_csv(ensemble));
    std::cout << fmt::format("bio fb{}: {}/{}\n", args.k, ensemble.successes,
                             global.replicates);
  }

  // Time-correlation block.
  {
    cn::TcOptions options;
    apply_model_flags(global, flags, options.cn);
    options.correlated_channels = args.k;
    options.variant = variant;
    options.delta = args.delta;
    options.sigma2 = args.sigma2;
    options.t_transient = args.t_transient;
    options.t_window = args.t_window;
    options.ensemble.replicates = global.replicates;
    options.ensemble.master_seed = cn::derive_seed(global.seed, 202);
    options.ensemble.jobs = global.jobs;
    const cn::TaskEnsemble ensemble = cn::run_tc(options);
    summary << fmt::format("tc{}_successes,{}\n", args.k, ensemble.successes);
    out.write("tc_weights.csv", ensemble_weights_csv(ensemble));
    std::cout << fmt::format("bio tc{}: {}/{}\n", args.k, ensemble.successes,
                             global.replicates);
  }

  out.write("bio.csv", summary.str());
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  out.finish(manifest);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chemical neuron: stochastic reaction-network simulator and "
               "experiment harness"};
  app.require_subcommand(1);

  GlobalArgs global;
  app.add_option("--seed", global.seed, "master seed");
  app.add_option("--out", global.out, "output directory");
  app.add_option("--config", global.config_file,
                 "flat key=value model config; flags override");
  app.add_option("--replicates", global.replicates, "ensemble size");
  app.add_option("--jobs", global.jobs, "max parallel replicate workers");
  app.add_flag("--svg", global.svg, "also write SVG charts");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand(
      "simulate", "run one network from a .crn file against a schedule");
  simulate->fallthrough();
  simulate->add_option("network", sim.network_file, ".crn network file")
      ->required();
  simulate->add_option("--schedule", sim.schedule_file,
                       "stimulus CSV (time,channel,count)");
  simulate->add_option("--t-end", sim.t_end, "simulated time span")
      ->required();
  simulate->add_option("--stride", sim.stride, "sampling stride");
  simulate->add_flag("--ode", sim.ode, "mean-field integration instead of SSA");
  simulate->add_option("--rtol", sim.rtol, "ODE relative tolerance");
  simulate->add_option("--atol", sim.atol, "ODE absolute tolerance");

  auto* model = app.add_subcommand("model", "network construction utilities");
  model->require_subcommand(1);
  EmitArgs emit_args;
  ModelFlags emit_flags;
  auto* emit = model->add_subcommand("emit", "print a built network as text");
  emit->fallthrough();
  emit->add_option("--variant", emit_args.variant, "basic or bio")
      ->check(CLI::IsMember({"basic", "bio"}));
  emit->add_option("--n", emit_args.channels, "channel count");
  emit->add_option("--m", emit_args.chain_length, "chain length");
  add_model_flags(emit, emit_flags);

  AssocArgs assoc_args;
  ModelFlags assoc_flags;
  auto* assoc = app.add_subcommand("assoc", "associative learning run");
  assoc->fallthrough();
  assoc->add_option("--variant", assoc_args.variant, "basic, bio, or hill")
      ->check(CLI::IsMember({"basic", "bio", "hill"}));
  assoc->add_option("--coincidences", assoc_args.coincidences,
                    "paired stimulation count");
  assoc->add_option("--pair-spacing", assoc_args.pair_spacing,
                    "time between pairs");
  assoc->add_option("--probe-window", assoc_args.probe_window,
                    "trigger search window after each probe");
  assoc->add_option("--pair-window", assoc_args.pair_window,
                    "weight increment window per pair");
  assoc->add_option("--min-trigger", assoc_args.min_trigger,
                    "signal copies that count as a trigger");
  assoc->add_option("--stride", assoc_args.stride, "sampling stride");
  add_model_flags(assoc, assoc_flags);

  TaskArgs fb_args;
  ModelFlags fb_flags;
  auto* fb = app.add_subcommand("fb", "frequency-bias task ensemble");
  fb->fallthrough();
  fb->add_option("--k", fb_args.k, "high-frequency channel count");
  fb->add_option("--variant", fb_args.variant, "basic, bio, or hill")
      ->check(CLI::IsMember({"basic", "bio", "hill"}));
  fb->add_option("--f-high", fb_args.f_high, "fast channel frequency");
  fb->add_option("--f-low", fb_args.f_low, "slow channel frequency");
  fb->add_option("--t-transient", fb_args.t_transient,
                 "settling time before the measuring window");
  fb->add_option("--t-window", fb_args.t_window, "measuring window length");
  fb->add_option("--stride", fb_args.stride, "sampling stride");
  add_model_flags(fb, fb_flags);

  TaskArgs tc_args;
  ModelFlags tc_flags;
  auto* tc = app.add_subcommand("tc", "time-correlation task ensemble");
  tc->fallthrough();
  tc->add_option("--k", tc_args.k, "correlated channel count");
  tc->add_option("--variant", tc_args.variant, "basic, bio, or hill")
      ->check(CLI::IsMember({"basic", "bio", "hill"}));
  tc->add_option("--frequency", tc_args.frequency, "event frequency");
  tc->add_option("--delta", tc_args.delta, "follower lag");
  tc->add_option("--sigma2", tc_args.sigma2, "follower jitter variance");
  tc->add_option("--t-transient", tc_args.t_transient,
                 "settling time before the measuring window");
  tc->add_option("--t-window", tc_args.t_window, "measuring window length");
  tc->add_option("--stride", tc_args.stride, "sampling stride");
  add_model_flags(tc, tc_flags);

  SweepBolusArgs bolus_args;
  ModelFlags bolus_flags;
  auto* sweep_bolus = app.add_subcommand(
      "sweep-bolus", "bolus-size sweep of the mixed correlation task");
  sweep_bolus->fallthrough();
  sweep_bolus->add_option("--m-list", bolus_args.m_list, "chain lengths")
      ->delimiter(',');
  sweep_bolus
      ->add_option("--fractions", bolus_args.fractions,
                   "bolus sizes as threshold fractions")
      ->delimiter(',');
  sweep_bolus->add_option("--delta", bolus_args.delta, "follower lag");
  sweep_bolus->add_option("--sigma2", bolus_args.sigma2, "follower jitter");
  sweep_bolus->add_option("--f-corr", bolus_args.f_correlated,
                          "correlated pair frequency");
  sweep_bolus->add_option("--f-free", bolus_args.f_free,
                          "independent channel frequency");
  sweep_bolus->add_option("--t-transient", bolus_args.t_transient,
                          "settling time");
  sweep_bolus->add_option("--t-window", bolus_args.t_window,
                          "measuring window");
  add_model_flags(sweep_bolus, bolus_flags);

  SweepDelayArgs delay_args;
  ModelFlags delay_flags;
  auto* sweep_delay = app.add_subcommand(
      "sweep-delay", "two-bolus delay sweep of the weight split");
  sweep_delay->fallthrough();
  sweep_delay->add_option("--m-list", delay_args.m_list, "chain lengths")
      ->delimiter(',');
  sweep_delay->add_option("--deltas", delay_args.deltas, "bolus delays")
      ->delimiter(',');
  sweep_delay
      ->add_option("--removal-rates", delay_args.removal_rates,
                   "sweep B-removal rates at fixed m instead")
      ->delimiter(',');
  sweep_delay->add_option("--post-window", delay_args.post_window,
                          "run time after the second bolus");
  sweep_delay->add_flag("--no-baseline", delay_args.no_baseline,
                        "skip the single-bolus baseline rows");
  add_model_flags(sweep_delay, delay_flags);

  SweepIodArgs iod_args;
  ModelFlags iod_flags;
  auto* sweep_iod = app.add_subcommand(
      "sweep-iod", "discrimination (index of dispersion) vs chain length");
  sweep_iod->fallthrough();
  sweep_iod->add_option("--m-list", iod_args.m_list, "chain lengths")
      ->delimiter(',');
  sweep_iod
      ->add_option("--fractions", iod_args.fractions,
                   "bolus sizes as threshold fractions")
      ->delimiter(',');
  sweep_iod->add_option("--task", iod_args.task, "tc2 or fb2")
      ->check(CLI::IsMember({"tc2", "fb2"}));
  sweep_iod->add_option("--frequency", iod_args.frequency, "base frequency");
  sweep_iod->add_option("--f-high", iod_args.f_high, "fb2 fast frequency");
  sweep_iod->add_option("--delta", iod_args.delta, "tc2 follower lag");
  sweep_iod->add_option("--sigma2", iod_args.sigma2, "tc2 follower jitter");
  sweep_iod->add_option("--t-transient", iod_args.t_transient,
                        "settling time");
  sweep_iod->add_option("--t-window", iod_args.t_window, "measuring window");
  add_model_flags(sweep_iod, iod_flags);

  BioArgs bio_args;
  ModelFlags bio_flags;
  auto* bio = app.add_subcommand(
      "bio", "compartmentalized-variant replication: associative plus "
             "ordering tasks");
  bio->fallthrough();
  bio->add_option("--variant", bio_args.variant, "bio or hill")
      ->check(CLI::IsMember({"bio", "hill"}));
  bio->add_option("--k", bio_args.k, "channels in the ordered group");
  bio->add_option("--delta", bio_args.delta, "follower lag");
  bio->add_option("--sigma2", bio_args.sigma2, "follower jitter variance");
  bio->add_option("--t-transient", bio_args.t_transient, "settling time");
  bio->add_option("--t-window", bio_args.t_window, "measuring window");
  add_model_flags(bio, bio_flags);

  try {
    app.parse(argc, argv);

    if (simulate->parsed()) {
      run_simulate(argc, argv, global, sim);
    } else if (model->parsed() && emit->parsed()) {
      run_emit(global, emit_args, emit_flags);
    } else if (assoc->parsed()) {
      run_assoc(argc, argv, global, assoc_args, assoc_flags);
    } else if (fb->parsed()) {
      run_fb_cmd(argc, argv, global, fb_args, fb_flags);
    } else if (tc->parsed()) {
      run_tc_cmd(argc, argv, global, tc_args, tc_flags);
    } else if (sweep_bolus->parsed()) {
      run_sweep_bolus(argc, argv, global, bolus_args, bolus_flags);
    } else if (sweep_delay->parsed()) {
      run_sweep_delay(argc, argv, global, delay_args, delay_flags);
    } else if (sweep_iod->parsed()) {
      run_sweep_iod(argc, argv, global, iod_args, iod_flags);
    } else if (bio->parsed()) {
      run_bio(argc, argv, global, bio_args, bio_flags);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const cn::ParseError& e) {
    std::cerr << fmt::format("error: {} (line {}, column {})\n", e.what(),
                             e.line(), e.column());
    return 2;
  } catch (const cn::SimulationError& e) {
    std::cerr << fmt::format("simulation error: {}\n", e.what());
    return 3;
  } catch (const cn::Error& e) {
    std::cerr << fmt::format("error: {}\n", e.what());
    return 2;
  }
  return 0;
}
