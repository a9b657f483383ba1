"""Default cluster-head election and relay-selection rule bases.

Breakpoints for the battery variables are fractions of the super-node
energy; every other breakpoint is in meters. All of them can be replaced
from the simulator config.
"""

from .fuzzy import FuzzyRule, LinguisticVariable, RuleBase, trapezoidal, triangular

ELECTION_LABELS = ("very_weak", "weak", "medium", "strong", "very_strong")
ELECTION_CENTROIDS = (10.0, 30.0, 50.0, 70.0, 90.0)
RELAY_LABELS = ("weak", "medium", "strong")
RELAY_CENTROIDS = (20.0, 50.0, 80.0)

# (centrality, battery, dist_bs) -> output, in the reference row order
ELECTION_TABLE = (
    ("far", "high", "far", "weak"),
    ("far", "high", "moderate", "weak"),
    ("far", "high", "near", "medium"),
    ("far", "low", "far", "very_weak"),
    ("far", "low", "moderate", "very_weak"),
    ("far", "low", "near", "very_weak"),
    ("far", "moderate", "far", "very_weak"),
    ("far", "moderate", "moderate", "weak"),
    ("far", "moderate", "near", "very_weak"),
    ("moderate", "high", "far", "medium"),
    ("moderate", "high", "moderate", "strong"),
    ("moderate", "high", "near", "strong"),
    ("moderate", "low", "far", "very_weak"),
    ("moderate", "low", "moderate", "weak"),
    ("moderate", "low", "near", "very_weak"),
    ("moderate", "moderate", "far", "weak"),
    ("moderate", "moderate", "moderate", "strong"),
    ("moderate", "moderate", "near", "medium"),
    ("near", "high", "near", "very_strong"),
    ("near", "high", "far", "strong"),
    ("near", "high", "moderate", "very_strong"),
    ("near", "low", "far", "very_weak"),
    ("near", "low", "moderate", "very_weak"),
    ("near", "low", "near", "very_weak"),
    ("near", "moderate", "far", "medium"),
    ("near", "moderate", "moderate", "strong"),
    ("near", "moderate", "near", "strong"),
)

# (battery_ch, distance_mh) -> output. Low battery never relays well and a
# Big hop defeats the purpose of relaying, so both map to weak.
RELAY_TABLE = (
    ("low", "small", "weak"),
    ("low", "medium", "weak"),
    ("low", "big", "weak"),
    ("moderate", "small", "strong"),
    ("moderate", "medium", "medium"),
    ("moderate", "big", "weak"),
    ("high", "small", "strong"),
    ("high", "medium", "medium"),
    ("high", "big", "weak"),
)

# label -> (shape, breakpoints); battery breakpoints are fractions of E_super
# Battery sets overlap everywhere so the score keeps tracking energy inside
# each band instead of flattening where only one set fires.
DEFAULT_SETS = {
    "battery": (
        (0.0, 1.0),
        (("low", ("trapezoidal", (0.0, 0.0, 0.0, 0.5))),
         ("moderate", ("triangular", (0.0, 0.5, 1.0))),
         ("high", ("trapezoidal", (0.5, 1.0, 1.0, 1.0)))),
    ),
    "centrality": (
        (0.0, 75.0),
        (("near", ("trapezoidal", (0.0, 0.0, 8.0, 20.0))),
         ("moderate", ("triangular", (12.0, 28.0, 45.0))),
         ("far", ("trapezoidal", (35.0, 55.0, 75.0, 75.0)))),
    ),
    "dist_bs": (
        (0.0, 150.0),
        (("near", ("trapezoidal", (0.0, 0.0, 30.0, 60.0))),
         ("moderate", ("triangular", (45.0, 75.0, 105.0))),
         ("far", ("trapezoidal", (90.0, 120.0, 150.0, 150.0)))),
    ),
    "battery_ch": (
        (0.0, 1.0),
        (("low", ("trapezoidal", (0.0, 0.0, 0.0, 0.5))),
         ("moderate", ("triangular", (0.0, 0.5, 1.0))),
         ("high", ("trapezoidal", (0.5, 1.0, 1.0, 1.0)))),
    ),
    # Medium reaches past 83 m so the point where Big starts is still covered
    "distance_mh": (
        (0.0, 100.0),
        (("small", ("trapezoidal", (0.0, 0.0, 25.0, 50.0))),
         ("medium", ("triangular", (40.0, 62.0, 85.0))),
         ("big", ("trapezoidal", (83.0, 90.0, 100.0, 100.0)))),
    ),
}

ENERGY_SCALED = frozenset({"battery", "battery_ch"})
UNITS = {"battery": "J", "battery_ch": "J", "centrality": "m", "dist_bs": "m", "distance_mh": "m"}


def make_variable(name, universe, sets, e_super=1.0) -> LinguisticVariable:
    scale = e_super if name in ENERGY_SCALED else 1.0
    built = []
    for label, (shape, points) in sets:
        ctor = triangular if shape == "triangular" else trapezoidal
        built.append((label, ctor(*(p * scale for p in points))))
    lo, hi = universe
    return LinguisticVariable(name, (lo * scale, hi * scale), tuple(built), UNITS.get(name, ""))


def _variables(e_super, sets):
    sets = {**DEFAULT_SETS, **(sets or {})}
    return {name: make_variable(name, *sets[name], e_super=e_super) for name in sets}


def election_base(e_super=1.5, sets=None, table=ELECTION_TABLE, centroids=None) -> RuleBase:
    v = _variables(e_super, sets)
    return RuleBase(
        name="election",
        inputs=(v["centrality"], v["battery"], v["dist_bs"]),
        output="election_ch",
        centroids=tuple(centroids or zip(ELECTION_LABELS, ELECTION_CENTROIDS)),
        rules=tuple(FuzzyRule(tuple(row[:3]), row[3]) for row in table),
    )


def relay_base(e_super=1.5, sets=None, table=RELAY_TABLE, centroids=None) -> RuleBase:
    v = _variables(e_super, sets)
    return RuleBase(
        name="relay",
        inputs=(v["battery_ch"], v["distance_mh"]),
        output="relay",
        centroids=tuple(centroids or zip(RELAY_LABELS, RELAY_CENTROIDS)),
        rules=tuple(FuzzyRule(tuple(row[:2]), row[2]) for row in table),
    )
