"""Cluster-head election protocols sharing one radio and data-phase ledger."""

from .baselines import EdeecParams, EdeecProtocol, LeachParams, LeachProtocol
from .common import CATEGORIES, RoundMetrics, RoundPlan, SimulationFinished, compressed_bits, round_costs
from .fuzzy import FuzzyProtocol, elect_cluster_heads, resolve_routes, select_relays

PROTOCOLS = ("leach", "edeec", "fuzzy")

__all__ = [
    "CATEGORIES",
    "PROTOCOLS",
    "EdeecParams",
    "EdeecProtocol",
    "FuzzyProtocol",
    "LeachParams",
    "LeachProtocol",
    "RoundMetrics",
    "RoundPlan",
    "SimulationFinished",
    "compressed_bits",
    "elect_cluster_heads",
    "resolve_routes",
    "round_costs",
    "select_relays",
]
