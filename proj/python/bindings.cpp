// Python surface: network construction, the DSL, both integrators, the
// stimulus generators, and the experiment entry points. Long-running calls
// release the GIL; the ensembles use their own worker threads.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "chemneuron/cn_model.hpp"
#include "chemneuron/dsl.hpp"
#include "chemneuron/errors.hpp"
#include "chemneuron/experiments.hpp"
#include "chemneuron/ode.hpp"
#include "chemneuron/rng.hpp"
#include "chemneuron/ssa.hpp"
#include "chemneuron/stimulus.hpp"
#include "chemneuron/trajectory.hpp"
#include "chemneuron/version.hpp"

namespace py = pybind11;
namespace cn = chemneuron;

namespace {

std::vector<std::string> species_names(const cn::NetworkSpec& network) {
  std::vector<std::string> names;
  names.reserve(network.species_count());
  for (const auto& species : network.species()) names.push_back(species.name);
  return names;
}

std::vector<double> trajectory_values(const cn::Trajectory& trajectory,
                                      const std::string& species) {
  const std::size_t col = trajectory.column(species);
  std::vector<double> values;
  values.reserve(trajectory.sample_count());
  for (std::size_t i = 0; i < trajectory.sample_count(); ++i) {
    values.push_back(trajectory.value(i, col));
  }
  return values;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "stochastic chemical-neuron simulator";
  m.attr("__version__") = cn::kVersion;

  py::register_exception<cn::ConfigError>(m, "ConfigError");
  py::register_exception<cn::ParseError>(m, "DslParseError");
  py::register_exception<cn::SimulationError>(m, "SimulationError");

  py::class_<cn::NetworkSpec>(m, "NetworkSpec")
      .def(py::init<>())
      .def("add_species", &cn::NetworkSpec::add_species, py::arg("name"),
           py::arg("initial") = 0)
      .def("species_id",
           [](const cn::NetworkSpec& n, const std::string& name) {
             return n.species_id(name);
           })
      .def("add_reaction", &cn::NetworkSpec::add_reaction,
           py::arg("reactants"), py::arg("products"), py::arg("rate"))
      .def("add_reversible", &cn::NetworkSpec::add_reversible,
           py::arg("left"), py::arg("right"), py::arg("k_forward"),
           py::arg("k_reverse"))
      .def("set_initial_count", &cn::NetworkSpec::set_initial_count)
      .def("initial_count", &cn::NetworkSpec::initial_count)
      .def_property_readonly("species_count", &cn::NetworkSpec::species_count)
      .def_property_readonly("reaction_count",
                             &cn::NetworkSpec::reaction_count)
      .def_property_readonly("species_names", &species_names);

  m.def("parse_network",
        [](const std::string& text) { return cn::parse_network(text); },
        py::arg("text"));
  m.def("print_network", &cn::print_network, py::arg("network"));

  py::class_<cn::BasicRates>(m, "BasicRates")
      .def(py::init<>())
      .def_readwrite("k_IA", &cn::BasicRates::k_IA)
      .def_readwrite("k_AB", &cn::BasicRates::k_AB)
      .def_readwrite("k_BA", &cn::BasicRates::k_BA)
      .def_readwrite("k_plus", &cn::BasicRates::k_plus)
      .def_readwrite("k_minus", &cn::BasicRates::k_minus)
      .def_readwrite("k_minus_last", &cn::BasicRates::k_minus_last)
      .def_readwrite("k_AE", &cn::BasicRates::k_AE)
      .def_readwrite("k_EA", &cn::BasicRates::k_EA)
      .def_readwrite("k_EH", &cn::BasicRates::k_EH)
      .def_readwrite("k_HE", &cn::BasicRates::k_HE)
      .def_readwrite("k_AH", &cn::BasicRates::k_AH)
      .def_readwrite("k_HA", &cn::BasicRates::k_HA)
      .def_readwrite("k_HB", &cn::BasicRates::k_HB)
      .def_readwrite("k_BH", &cn::BasicRates::k_BH)
      .def_readwrite("k_H_decay", &cn::BasicRates::k_H_decay)
      .def_readwrite("k_B_decay", &cn::BasicRates::k_B_decay);

  py::class_<cn::BioRates>(m, "BioRates")
      .def(py::init<>())
      .def_readwrite("k_IA", &cn::BioRates::k_IA)
      .def_readwrite("k_AI", &cn::BioRates::k_AI)
      .def_readwrite("k_plus", &cn::BioRates::k_plus)
      .def_readwrite("k_minus", &cn::BioRates::k_minus)
      .def_readwrite("k_minus_last", &cn::BioRates::k_minus_last)
      .def_readwrite("k_AE", &cn::BioRates::k_AE)
      .def_readwrite("k_EA", &cn::BioRates::k_EA)
      .def_readwrite("k_AstarE", &cn::BioRates::k_AstarE)
      .def_readwrite("k_EAstar", &cn::BioRates::k_EAstar)
      .def_readwrite("k_AstarA", &cn::BioRates::k_AstarA)
      .def_readwrite("k_AAstar", &cn::BioRates::k_AAstar)
      .def_readwrite("k_Astarh", &cn::BioRates::k_Astarh)
      .def_readwrite("k_hAstar", &cn::BioRates::k_hAstar)
      .def_readwrite("k_leak", &cn::BioRates::k_leak)
      .def_readwrite("k_h", &cn::BioRates::k_h)
      .def_readwrite("k_AH", &cn::BioRates::k_AH)
      .def_readwrite("k_HA", &cn::BioRates::k_HA)
      .def_readwrite("k_HB", &cn::BioRates::k_HB)
      .def_readwrite("k_BH", &cn::BioRates::k_BH)
      .def_readwrite("k_H_decay", &cn::BioRates::k_H_decay)
      .def_readwrite("k_B_decay", &cn::BioRates::k_B_decay)
      .def_readwrite("hill_exponent", &cn::BioRates::hill_exponent);

  py::class_<cn::CNConfig>(m, "CNConfig")
      .def(py::init<>())
      .def_readwrite("channels", &cn::CNConfig::channels)
      .def_readwrite("chain_length", &cn::CNConfig::chain_length)
      .def_readwrite("bolus_size", &cn::CNConfig::bolus_size)
      .def_readwrite("e_total", &cn::CNConfig::e_total)
      .def_readwrite("gene_copies", &cn::CNConfig::gene_copies)
      .def_readwrite("initial_weights", &cn::CNConfig::initial_weights)
      .def_readwrite("basic", &cn::CNConfig::basic)
      .def_readwrite("bio", &cn::CNConfig::bio);

  m.def("build_basic_cn", &cn::build_basic_cn, py::arg("config"));
  m.def("build_bio_cn", &cn::build_bio_cn, py::arg("config"));
  m.def("build_hill_cn",
        py::overload_cast<const cn::CNConfig&>(&cn::build_hill_cn),
        py::arg("config"));
  m.def("build_hill_cn",
        py::overload_cast<const cn::CNConfig&, double, double>(
            &cn::build_hill_cn),
        py::arg("config"), py::arg("hill_exponent"), py::arg("theta"));
  m.def("activation_equilibrium", &cn::activation_equilibrium, py::arg("m"),
        py::arg("rates"), py::arg("n_B"));
  m.def("estimate_threshold",
        [](int m, const cn::BasicRates& rates) {
          return cn::estimate_threshold(m, rates).theta;
        },
        py::arg("m"), py::arg("rates"));
  m.def("effective_hill_exponent", &cn::effective_hill_exponent, py::arg("m"),
        py::arg("rates"));
  m.def("input_species", &cn::input_species);
  m.def("weight_species", &cn::weight_species);
  m.def("trigger_species", &cn::trigger_species);
  m.def("derive_seed", &cn::derive_seed, py::arg("master"), py::arg("index"));

  py::class_<cn::ChannelEvent>(m, "ChannelEvent")
      .def(py::init([](double time, int channel, cn::Count count) {
             return cn::ChannelEvent{time, channel, count};
           }),
           py::arg("time"), py::arg("channel"), py::arg("count"))
      .def_readwrite("time", &cn::ChannelEvent::time)
      .def_readwrite("channel", &cn::ChannelEvent::channel)
      .def_readwrite("count", &cn::ChannelEvent::count);

  py::class_<cn::ChannelSchedule>(m, "ChannelSchedule")
      .def(py::init<>())
      .def(py::init<std::vector<cn::ChannelEvent>>(), py::arg("events"))
      .def_property_readonly("events",
                             [](const cn::ChannelSchedule& s) {
                               return std::vector<cn::ChannelEvent>(
                                   s.events().begin(), s.events().end());
                             })
      .def("__len__", &cn::ChannelSchedule::size)
      .def("to_csv",
           [](const cn::ChannelSchedule& s) {
             std::ostringstream out;
             s.write_csv(out);
             return out.str();
           })
      .def_static("from_csv", [](const std::string& text) {
        return cn::ChannelSchedule::read_csv(text);
      });

  py::class_<cn::ChannelProcess>(m, "ChannelProcess");
  m.def("poisson",
        [](int channel, double frequency) {
          return cn::ChannelProcess{channel, cn::PoissonProcess{frequency}};
        },
        py::arg("channel"), py::arg("frequency"));
  m.def("follower",
        [](int channel, int of_channel, double delta, double sigma2) {
          return cn::ChannelProcess{
              channel, cn::FollowerProcess{of_channel, delta, sigma2}};
        },
        py::arg("channel"), py::arg("of_channel"), py::arg("delta"),
        py::arg("sigma2") = 0.0);
  m.def("fixed",
        [](int channel, std::vector<double> times) {
          return cn::ChannelProcess{channel,
                                    cn::FixedProcess{std::move(times)}};
        },
        py::arg("channel"), py::arg("times"));
  m.def("generate_schedule",
        [](const std::vector<cn::ChannelProcess>& processes, cn::Count beta,
           double t_end, std::uint64_t seed) {
          return cn::generate_schedule(processes, beta, t_end, seed);
        },
        py::arg("processes"), py::arg("beta"), py::arg("t_end"),
        py::arg("seed"));

  py::class_<cn::AssociativePattern>(m, "AssociativePattern")
      .def(py::init<>())
      .def_readwrite("probe_pre", &cn::AssociativePattern::probe_pre)
      .def_readwrite("first_pair", &cn::AssociativePattern::first_pair)
      .def_readwrite("coincidences", &cn::AssociativePattern::coincidences)
      .def_readwrite("pair_spacing", &cn::AssociativePattern::pair_spacing)
      .def_readwrite("pair_jitter", &cn::AssociativePattern::pair_jitter)
      .def_readwrite("probe_post_gap",
                     &cn::AssociativePattern::probe_post_gap)
      .def_readwrite("beta", &cn::AssociativePattern::beta);
  m.def("associative_schedule", &cn::associative_schedule,
        py::arg("pattern"));

  py::class_<cn::Trajectory>(m, "Trajectory")
      .def_property_readonly("species_names", &cn::Trajectory::species_names)
      .def_property_readonly("times",
                             [](const cn::Trajectory& t) { return t.times(); })
      .def_property_readonly("sample_count", &cn::Trajectory::sample_count)
      .def("values", &trajectory_values, py::arg("species"))
      .def("window_mean",
           [](const cn::Trajectory& t, const std::string& species, double t0,
              double t1) { return t.window_mean(t.column(species), t0, t1); },
           py::arg("species"), py::arg("t_start"), py::arg("t_end"))
      .def("to_csv", [](const cn::Trajectory& t) {
        std::ostringstream out;
        t.write_csv(out);
        return out.str();
      });

  m.def("ssa_run",
        [](const cn::NetworkSpec& network, const cn::ChannelSchedule& schedule,
           double t_end, std::uint64_t seed, double stride, bool record) {
          cn::SsaOptions options;
          options.stride = stride;
          options.record = record;
          return cn::ssa_run(network, schedule.bind_to_network(network), t_end,
                             seed, options);
        },
        py::arg("network"), py::arg("schedule"), py::arg("t_end"),
        py::arg("seed"), py::arg("stride") = 1e-3, py::arg("record") = true,
        py::call_guard<py::gil_scoped_release>());
  m.def("ode_run",
        [](const cn::NetworkSpec& network, const cn::ChannelSchedule& schedule,
           double t_end, double stride, double rtol, double atol) {
          cn::OdeOptions options;
          options.stride = stride;
          options.rtol = rtol;
          options.atol = atol;
          return cn::ode_run(network, schedule.bind_to_network(network), t_end,
                             options);
        },
        py::arg("network"), py::arg("schedule"), py::arg("t_end"),
        py::arg("stride") = 1e-3, py::arg("rtol") = 1e-8,
        py::arg("atol") = 1e-10, py::call_guard<py::gil_scoped_release>());

  py::class_<cn::WeightSummary>(m, "WeightSummary")
      .def_readonly("mean_weights", &cn::WeightSummary::mean_weights)
      .def_readonly("normalized", &cn::WeightSummary::normalized)
      .def_readonly("window_start", &cn::WeightSummary::window_start)
      .def_readonly("window_end", &cn::WeightSummary::window_end);
  m.def("steady_state_weights", &cn::steady_state_weights,
        py::arg("trajectory"), py::arg("channels"),
        py::arg("t_transient") = 700.0, py::arg("t_window") = 300.0);
  m.def("index_of_dispersion", &cn::index_of_dispersion, py::arg("summary"));

  py::class_<cn::TaskEnsemble>(m, "TaskEnsemble")
      .def_readonly("runs", &cn::TaskEnsemble::runs)
      .def_readonly("successes", &cn::TaskEnsemble::successes);

  m.def("run_fb",
        [](int k, int replicates, std::uint64_t seed, int jobs) {
          cn::FbOptions options;
          options.biased_channels = k;
          options.ensemble.replicates = replicates;
          options.ensemble.master_seed = seed;
          options.ensemble.jobs = jobs;
          return cn::run_fb(options);
        },
        py::arg("k") = 2, py::arg("replicates") = 10, py::arg("seed") = 1,
        py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("run_tc",
        [](int k, int replicates, std::uint64_t seed, int jobs) {
          cn::TcOptions options;
          options.correlated_channels = k;
          options.ensemble.replicates = replicates;
          options.ensemble.master_seed = seed;
          options.ensemble.jobs = jobs;
          return cn::run_tc(options);
        },
        py::arg("k") = 2, py::arg("replicates") = 10, py::arg("seed") = 1,
        py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>());

  py::class_<cn::TriggerInterval>(m, "TriggerInterval")
      .def_readonly("start", &cn::TriggerInterval::start)
      .def_readonly("end", &cn::TriggerInterval::end);
  m.def("detect_trigger", &cn::detect_trigger, py::arg("trajectory"),
        py::arg("species"), py::arg("min_count") = 1,
        py::arg("min_duration") = 0.0);

  py::class_<cn::AssocReport>(m, "AssocReport")
      .def_readonly("pre_trigger", &cn::AssocReport::pre_trigger)
      .def_readonly("post_trigger", &cn::AssocReport::post_trigger)
      .def_readonly("dh1_per_pair", &cn::AssocReport::dh1_per_pair)
      .def_readonly("dh2_per_pair", &cn::AssocReport::dh2_per_pair)
      .def_readonly("triggers", &cn::AssocReport::triggers)
      .def_readonly("trajectory", &cn::AssocReport::trajectory);
  m.def("run_associative",
        [](std::uint64_t seed) {
          cn::AssocOptions options;
          options.seed = seed;
          return cn::run_associative(options);
        },
        py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());
}
