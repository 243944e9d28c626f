"""End-to-end smoke tests of the python package against the C++ core."""

import math

import pytest

import chemneuron as cn


def test_version_string():
    assert isinstance(cn.__version__, str) and cn.__version__


def test_parse_print_roundtrip():
    text = "species A = 5\nspecies B = 0\nA -> B @ 2.5\nB -> @ 0.1\n"
    net = cn.parse_network(text)
    printed = cn.print_network(net)
    assert cn.print_network(cn.parse_network(printed)) == printed
    assert "A" in printed and "2.5" in printed


def test_parse_error_carries_location():
    with pytest.raises(cn.DslParseError):
        cn.parse_network("A -> B @\n")


def test_built_network_size():
    config = cn.CNConfig()
    config.channels = 2
    config.chain_length = 3
    net = cn.build_basic_cn(config)
    printed = cn.print_network(net)
    species_lines = [l for l in printed.splitlines() if l.startswith("species")]
    reaction_lines = [l for l in printed.splitlines() if "@" in l]
    assert len(species_lines) == 15
    assert len(reaction_lines) == 31


def test_ssa_birth_death_mean():
    net = cn.NetworkSpec()
    x = net.add_species("X", 0)
    net.add_reaction([], [x], 10.0)
    net.add_reaction([x], [], 1.0)
    traj = cn.ssa_run(net, cn.ChannelSchedule(), t_end=200.0, seed=1,
                      stride=0.1)
    mean = traj.window_mean("X", 50.0, 200.0)
    assert abs(mean - 10.0) < 1.5


def test_ssa_reproducible():
    net = cn.NetworkSpec()
    x = net.add_species("X", 100)
    net.add_reaction([x], [], 0.5)
    a = cn.ssa_run(net, cn.ChannelSchedule(), t_end=5.0, seed=9, stride=0.5)
    b = cn.ssa_run(net, cn.ChannelSchedule(), t_end=5.0, seed=9, stride=0.5)
    c = cn.ssa_run(net, cn.ChannelSchedule(), t_end=5.0, seed=10, stride=0.5)
    assert a.to_csv() == b.to_csv()
    assert a.to_csv() != c.to_csv()


def test_ode_exponential_decay():
    net = cn.NetworkSpec()
    x = net.add_species("X", 1000)
    net.add_reaction([x], [], 0.1)
    traj = cn.ode_run(net, cn.ChannelSchedule(), t_end=10.0, stride=1.0)
    final = traj.values("X")[-1]
    assert abs(final - 1000.0 * math.exp(-1.0)) < 1e-3 * final


def test_schedule_generation_and_injection():
    procs = [cn.poisson(1, 2.0)]
    schedule = cn.generate_schedule(procs, beta=5, t_end=50.0, seed=3)
    assert len(schedule) > 0
    csv = schedule.to_csv()
    assert csv.splitlines()[0] == "time,channel,count"

    net = cn.NetworkSpec()
    net.add_species("I1", 0)
    traj = cn.ssa_run(net, schedule, t_end=50.0, seed=4, stride=1.0)
    assert traj.values("I1")[-1] > 0


def test_threshold_oracle():
    rates = cn.BasicRates()
    theta = cn.estimate_threshold(5, rates).theta
    assert 3.5 < theta < 4.5
    p = cn.activation_equilibrium(5, rates, theta)
    assert abs(p - 0.5) < 1e-3
    assert cn.effective_hill_exponent(3, rates) <= 3.0 + 1e-9


def test_associative_run_shape():
    report = cn.run_associative(seed=1)
    assert isinstance(report.pre_trigger, bool)
    assert isinstance(report.post_trigger, bool)
    assert report.dh2_per_pair >= 0.0
    assert report.trajectory.sample_count > 0
    triggers = cn.detect_trigger(report.trajectory, cn.trigger_species())
    assert isinstance(triggers, list)


def test_steady_state_weights_window_check():
    net = cn.NetworkSpec()
    net.add_species("H1", 3)
    traj = cn.ssa_run(net, cn.ChannelSchedule(), t_end=5.0, seed=1, stride=1.0)
    with pytest.raises(cn.ConfigError):
        cn.steady_state_weights(traj, 1)  # window extends past the run
    summary = cn.steady_state_weights(traj, 1, t_transient=1.0, t_window=3.0)
    assert summary.mean_weights == [3.0]
    assert summary.normalized == [1.0]
