import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzywsn import rulebases
from fuzzywsn.fuzzy import infer

BATTERY = ("low", "moderate", "high")
ELECTION_RANK = {label: i for i, label in enumerate(rulebases.ELECTION_LABELS)}
RELAY_RANK = {label: i for i, label in enumerate(rulebases.RELAY_LABELS)}

# Narrower battery breakpoints; kept to show they remain a valid partition.
NARROW_BATTERY = ((0.0, 1.0), (
    ("low", ("trapezoidal", (0.0, 0.0, 0.2, 0.5))),
    ("moderate", ("triangular", (0.3, 0.55, 0.8))),
    ("high", ("trapezoidal", (0.6, 0.85, 1.0, 1.0))),
))


def test_election_table_is_verbatim(election_rb):
    assert len(rulebases.ELECTION_TABLE) == 27
    assert election_rb.is_total()
    assert rulebases.ELECTION_TABLE[18] == ("near", "high", "near", "very_strong")
    assert rulebases.ELECTION_TABLE[0] == ("far", "high", "far", "weak")
    assert rulebases.ELECTION_TABLE[23] == ("near", "low", "near", "very_weak")
    assert len({row[:3] for row in rulebases.ELECTION_TABLE}) == 27


def test_election_table_monotone_in_battery(election_rb):
    for c, d in itertools.product(("near", "moderate", "far"), repeat=2):
        ranks = [ELECTION_RANK[election_rb.lookup(c, b, d)] for b in BATTERY]
        assert ranks == sorted(ranks), (c, d, ranks)


def test_relay_table_monotone(relay_rb):
    assert relay_rb.is_total() and len(relay_rb.rules) == 9
    for b in BATTERY:
        ranks = [RELAY_RANK[relay_rb.lookup(b, d)] for d in ("small", "medium", "big")]
        assert ranks == sorted(ranks, reverse=True)
    for d in ("small", "medium", "big"):
        ranks = [RELAY_RANK[relay_rb.lookup(b, d)] for b in BATTERY]
        assert ranks == sorted(ranks)
    assert relay_rb.lookup("high", "small") == "strong"
    assert relay_rb.lookup("low", "big") == "weak"


def test_centroids():
    rb = rulebases.election_base()
    assert [rb.centroid(label) for label in rulebases.ELECTION_LABELS] == [10, 30, 50, 70, 90]
    rb = rulebases.relay_base()
    assert [rb.centroid(label) for label in rulebases.RELAY_LABELS] == [20, 50, 80]


@pytest.mark.parametrize("name", sorted(rulebases.DEFAULT_SETS))
def test_default_variables_cover_their_universe(name):
    var = rulebases.make_variable(name, *rulebases.DEFAULT_SETS[name], e_super=1.5)
    assert var.coverage_gap() is None


def test_narrow_battery_sets_still_valid():
    var = rulebases.make_variable("battery", *NARROW_BATTERY, e_super=1.5)
    assert var.coverage_gap() is None
    rb = rulebases.election_base(1.5, {"battery": NARROW_BATTERY})
    assert rb.inputs[1].mf("moderate").points == pytest.approx((0.45, 0.825, 1.2))


def test_big_starts_at_83m():
    var = rulebases.make_variable("distance_mh", *rulebases.DEFAULT_SETS["distance_mh"])
    assert var.mf("big").degree(83.0) == 0.0
    assert var.mf("big").degree(83.5) > 0.0
    assert var.fuzzify(83.0)["medium"] > 0.0


def test_battery_scales_with_super_energy():
    rb = rulebases.election_base(e_super=3.0)
    assert rb.inputs[1].universe == (0.0, 3.0)
    assert rb.inputs[1].mf("high").points == (1.5, 3.0, 3.0, 3.0)


# Candidates for a far head's relay: (ch, battery J, hop m)
CANDIDATES = [(1, 1.4965, 83.1566), (2, 1.4965, 47.8956), (3, 1.4972, 44.4752), (5, 1.4957, 50.3652)]


def test_candidate_argmax_and_order(relay_rb):
    scores = {ch: infer(relay_rb, [e, d]) for ch, e, d in CANDIDATES}
    assert max(scores, key=scores.get) == 3
    by_distance = sorted(CANDIDATES, key=lambda row: row[2])
    ordered = [scores[ch] for ch, _, _ in by_distance]
    assert ordered == sorted(ordered, reverse=True)
    # CH 5 lands exactly on the medium centroid
    assert scores[5] == pytest.approx(50.0, abs=1e-9)


@given(st.floats(0.05, 1.5), st.lists(st.floats(0, 100), min_size=2, max_size=6, unique=True))
def test_equal_energies_pick_nearest(relay_rb, e, dists):
    scores = [infer(relay_rb, [e, d]) for d in dists]
    nearest = min(dists)
    assert all(s <= scores[dists.index(nearest)] + 1e-12 for s in scores)
