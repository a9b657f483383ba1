from dataclasses import replace

import numpy as np
import pytest

from fuzzywsn.network import HeterogeneityConfig
from fuzzywsn.protocols import PROTOCOLS
from fuzzywsn.sim import ExactSum, SimConfig, censored_fnd, compare, rng_streams, seed_list, simulate

SHORT = SimConfig(rounds=60)


def test_single_round():
    s = simulate(replace(SHORT, rounds=1))
    assert len(s.metrics) == 1 and s.metrics[0].round == 1
    assert s.rounds_simulated == 1


@pytest.mark.parametrize("bad", [{"rounds": 0}, {"k": 0}, {"protocol": "nope"}, {"compression": 0.0},
                                 {"kmeans_n_init": 0}, {"edeec_r_estimate": "soon"}])
def test_rejects_bad_config(bad):
    with pytest.raises(ValueError):
        simulate(replace(SHORT, **bad))


@pytest.mark.parametrize("protocol", PROTOCOLS)
def test_tiny_energy_dies_in_first_round(protocol):
    # survives the formation report (at most ~4.7e-5 J) but not a round (>= 2e-4 J)
    net = HeterogeneityConfig(n=2, e_normal=1e-4, e_advanced=1e-4, e_super=1e-4)
    s = simulate(SimConfig(protocol=protocol, rounds=5, k=1, network=net))
    assert s.fnd == 1
    assert s.metrics[-1].alive == 0
    # rounds after the last death are padded with zero rows
    assert [m.alive for m in s.metrics[1:]] == [0] * 4
    assert s.rounds_simulated == 1


def test_death_in_formation_is_round_zero():
    net = HeterogeneityConfig(n=2, e_normal=1e-5, e_advanced=1e-5, e_super=1e-5)
    s = simulate(SimConfig(rounds=3, k=1, network=net))
    assert s.fnd == 0 and s.rounds_simulated == 0


@pytest.mark.parametrize("protocol", PROTOCOLS)
def test_ledger_and_monotone_series(protocol):
    s = simulate(replace(SHORT, protocol=protocol, rounds=150))
    assert s.max_ledger_error <= 1e-12
    assert (np.diff(s.alive_series()) <= 0).all()
    assert (np.diff(s.residual_series()) <= 0).all()
    assert s.initial_energy_j == pytest.approx(130.0)
    assert s.formation_j > 0


@pytest.mark.parametrize("protocol", PROTOCOLS)
def test_determinism(protocol):
    a = simulate(replace(SHORT, protocol=protocol), trace=True)
    b = simulate(replace(SHORT, protocol=protocol), trace=True)
    assert a.metrics == b.metrics and a.traces == b.traces


def test_deployment_shared_across_protocols():
    result = compare(SHORT, PROTOCOLS, 2)
    for seed in result.seeds:
        sums = {result.runs[(p, seed)].deployment_checksum for p in PROTOCOLS}
        assert len(sums) == 1
    assert result.runs[("fuzzy", 1)].deployment_checksum != result.runs[("fuzzy", 2)].deployment_checksum


def test_protocol_streams_differ():
    _, a = rng_streams(1, "leach")
    _, b = rng_streams(1, "edeec")
    assert a.random() != b.random()


def test_fuzzy_trace():
    s = simulate(replace(SHORT, rounds=3), trace=True)
    assert [t.round for t in s.traces] == [1, 2, 3]
    for t in s.traces:
        assert len(t.heads) == 5 and sum(t.sizes) == 100


def test_censored_fnd_and_table():
    result = compare(replace(SHORT, rounds=20), ["fuzzy", "leach"], [3, 4])
    assert result.seeds == [3, 4]
    for key, run in result.runs.items():
        assert run.fnd is None
        assert result.fnd(*key) == 21 == censored_fnd(run, 20)
    row = result.table()[0]
    assert row == {"protocol": "fuzzy", "seeds": 2, "median_fnd": 21, "min_fnd": 21, "max_fnd": 21,
                   "median_final_alive": 100}


def test_seed_list():
    assert seed_list(5, 3) == [5, 6, 7]
    assert seed_list(5, [9, 1]) == [9, 1]
    with pytest.raises(ValueError):
        seed_list(1, 0)
    with pytest.raises(ValueError):
        compare(SHORT, [], 1)


def test_workers_do_not_change_results():
    one = compare(replace(SHORT, rounds=30), PROTOCOLS, 2, workers=1)
    two = compare(replace(SHORT, rounds=30), PROTOCOLS, 2, workers=2)
    for key in one.runs:
        assert one.runs[key].metrics == two.runs[key].metrics


def test_exact_sum():
    acc = ExactSum()
    for x in [1e16, 1.0, -1e16, 1e-3] * 1000:
        acc.add(x)
    assert acc.value() == pytest.approx(1000 * 1.001, rel=1e-15)


def test_fixed_round_estimate_is_used():
    s1 = simulate(replace(SHORT, protocol="edeec", edeec_r_estimate=5000.0))
    s2 = simulate(replace(SHORT, protocol="edeec"))
    assert [m.ch_count for m in s1.metrics] != [m.ch_count for m in s2.metrics]
