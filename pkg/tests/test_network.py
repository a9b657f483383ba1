import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzywsn.network import (
    BaseStation,
    HeterogeneityConfig,
    NodeClass,
    Population,
    deploy,
    formation_cost,
    partition,
    total_initial_energy,
)

fraction = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@pytest.mark.parametrize("mf, mp, expected", [
    (1.0, 0.6, (0, 40, 60)),
    (0.0, 0.6, (100, 0, 0)),
    (0.5, 0.6, (50, 20, 30)),
])
def test_partition_examples(mf, mp, expected):
    assert partition(HeterogeneityConfig(mf=mf, mp=mp)) == expected


@given(st.integers(0, 500), fraction, fraction)
def test_partition_sums_to_n(n, mf, mp):
    counts = partition(HeterogeneityConfig(n=n, mf=mf, mp=mp))
    assert sum(counts) == n and min(counts) >= 0


@pytest.mark.parametrize("mf, mp, total", [(1.0, 0.6, 130.0), (0.0, 0.6, 50.0), (0.5, 0.6, 90.0)])
def test_total_energy(mf, mp, total):
    cfg = HeterogeneityConfig(mf=mf, mp=mp)
    pop = deploy(cfg, 100, 100, 0)
    assert total_initial_energy(pop, cfg).total == pytest.approx(total, abs=1e-12)


def test_textbook_totals_disagree_with_class_sum():
    cfg = HeterogeneityConfig()
    rep = total_initial_energy(deploy(cfg, 100, 100, 0), cfg)
    assert rep.class_terms == pytest.approx(100.0)
    assert rep.closed_form == pytest.approx(180.0)
    assert rep.total == pytest.approx(130.0)
    # none of them is the 104.5 J quoted for the experiment
    assert 104.5 not in (rep.total, rep.class_terms, rep.closed_form)


def test_config_validation():
    with pytest.raises(ValueError):
        HeterogeneityConfig(mf=1.5)
    with pytest.raises(ValueError):
        HeterogeneityConfig(e_normal=2.0)
    with pytest.raises(ValueError):
        HeterogeneityConfig(n=-1)
    with pytest.raises(ValueError):
        deploy(HeterogeneityConfig(), 0, 100, 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(1, 500), st.floats(1, 500))
def test_deploy_determinism_and_range(seed, w, h):
    cfg = HeterogeneityConfig()
    a, b = deploy(cfg, w, h, seed), deploy(cfg, w, h, seed)
    assert np.array_equal(a.pos, b.pos) and a.checksum() == b.checksum()
    assert (a.pos[:, 0] >= 0).all() and (a.pos[:, 0] <= w).all()
    assert (a.pos[:, 1] >= 0).all() and (a.pos[:, 1] <= h).all()
    assert np.array_equal(np.bincount(a.cls, minlength=3), partition(cfg))
    assert np.array_equal(a.energy, np.array(cfg.class_energies)[a.cls])


def test_debit_clamps_at_zero():
    pop = Population([[0, 0], [1, 1]], [0, 2], [0.5, 1.5])
    taken = pop.debit([0.2, 2.0])
    assert taken.tolist() == [0.2, 1.5]
    assert pop.energy.tolist() == [0.3, 0.0]
    assert pop.alive.tolist() == [True, False]
    assert pop.alive_ids().tolist() == [0]
    assert pop.initial.tolist() == [0.5, 1.5]


def test_snapshot_rows():
    pop = Population([[1.0, 2.0]], [NodeClass.SUPER], [1.5])
    assert pop.snapshot_rows() == [(0, 1.0, 2.0, "super", 1.5, 1)]


def test_formation_cost_examples(radio):
    bs = BaseStation(0.0, 0.0)
    pop = Population([[0, 0], [50, 0], [95, 0]], [0, 0, 0], [0.5] * 3)
    cost = formation_cost(pop, bs, radio)
    assert cost[0] == pytest.approx(5e-6, abs=1e-18)
    assert cost[1] == pytest.approx(7.5e-6, abs=1e-18)
    assert cost[2] == pytest.approx(5e-6 + 100 * 1.3e-15 * 95.0 ** 4, rel=1e-12)
    far = Population([[100, 0]], [0], [0.5])
    d = 134.35028842544403
    assert formation_cost(far, BaseStation(5, 95), radio)[0] == pytest.approx(5e-6 + 1.3e-13 * d ** 4, rel=1e-12)
    assert formation_cost(far, BaseStation(5, 95), radio)[0] == pytest.approx(4.74e-5, rel=1e-3)
    assert len(formation_cost(Population(np.zeros((0, 2)), [], []), bs, radio)) == 0
