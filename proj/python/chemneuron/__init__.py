"""Stochastic chemical-neuron simulator: exact SSA and mean-field runs of
mass-action networks, the spiking-neuron constructions, and the learning
experiments, all backed by the C++ core."""

from chemneuron._core import (
    AssociativePattern,
    AssocReport,
    BasicRates,
    BioRates,
    ChannelEvent,
    ChannelProcess,
    ChannelSchedule,
    CNConfig,
    ConfigError,
    DslParseError,
    NetworkSpec,
    SimulationError,
    TaskEnsemble,
    Trajectory,
    TriggerInterval,
    WeightSummary,
    __version__,
    activation_equilibrium,
    associative_schedule,
    build_basic_cn,
    build_bio_cn,
    build_hill_cn,
    derive_seed,
    detect_trigger,
    effective_hill_exponent,
    estimate_threshold,
    fixed,
    follower,
    generate_schedule,
    index_of_dispersion,
    input_species,
    ode_run,
    parse_network,
    poisson,
    print_network,
    run_associative,
    run_fb,
    run_tc,
    ssa_run,
    steady_state_weights,
    trigger_species,
    weight_species,
)

__all__ = [name for name in dir() if not name.startswith("_")]
