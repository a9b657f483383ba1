"""Round plan and the energy ledger shared by every protocol.

A protocol only decides *who* leads and *where* aggregated data goes
(a :class:`RoundPlan`). Association, TDMA, the data phase and every radio
debit are computed here, so the protocols are compared on identical costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..geometry import ClusterLayout, distances
from ..network import BaseStation, Population
from ..radio import RadioParams, aggregation_energy, amplifier_energy, rx_energy, tx_energy

CATEGORIES = (
    "broadcast_rx",
    "announce_tx",
    "assoc_tx",
    "assoc_rx",
    "tdma_tx",
    "data_tx",
    "data_rx",
    "aggregation",
    "ch_tx",
    "relay_rx",
    "relay_tx",
    "direct_tx",
)


class SimulationFinished(Exception):
    """No node is alive, so no round can be played."""


@dataclass
class RoundPlan:
    """Who leads, who joins whom, and how each head's payload reaches the BS.

    ``member_of[i]`` is the head id node ``i`` reports to, or -1 for heads and
    dead nodes. ``routes[h]`` lists the relays after head ``h``; a head missing
    from ``routes`` sends straight to the BS.
    """

    alive: np.ndarray
    heads: np.ndarray
    member_of: np.ndarray
    routes: dict[int, tuple[int, ...]] = field(default_factory=dict)
    relay_map: dict[int, int] = field(default_factory=dict)
    layout: ClusterLayout | None = None
    scores: dict[int, float] = field(default_factory=dict)
    relay_scores: dict[int, dict[int, float]] = field(default_factory=dict)
    unrelayed: tuple[int, ...] = ()
    ch_announce: bool = False

    def cluster_sizes(self) -> dict[int, int]:
        """Head id -> members including the head."""
        sizes = {int(h): 1 for h in self.heads}
        for h in self.member_of[self.member_of >= 0].tolist():
            sizes[h] += 1
        return sizes


@dataclass
class RoundMetrics:
    round: int
    alive: int
    residual_j: float
    ch_count: int
    relay_count: int
    dead_ids: tuple[int, ...] = ()
    energy_by_category: dict[str, float] = field(default_factory=dict)
    consumed_j: float = 0.0
    ledger_error: float = 0.0
    unrelayed: int = 0
    relay_benefit_violations: int = 0


def compressed_bits(n_members, data_bits, ratio):
    """Aggregated payload size: ceil(ratio * (members + 1) * data_bits), at least one packet."""
    if not 0.0 < ratio <= 1.0:
        raise ValueError("compression ratio must lie in (0, 1]")
    raw = ratio * (np.asarray(n_members) + 1) * data_bits
    # 0.05 * 22 * 4000 lands a hair above 4400 in binary
    bits = np.ceil(raw - 1e-9 * np.maximum(raw, 1.0))
    out = np.maximum(bits, data_bits).astype(np.int64)
    return int(out) if out.ndim == 0 else out


def join_nearest(pos, alive, heads):
    """Assign every alive non-head node to its closest head (lowest id on ties)."""
    member_of = np.full(len(pos), -1, dtype=np.int64)
    is_head = np.zeros(len(pos), dtype=bool)
    is_head[heads] = True
    members = alive[~is_head[alive]]
    if len(members) and len(heads):
        dx = pos[members, None, 0] - pos[None, heads, 0]
        dy = pos[members, None, 1] - pos[None, heads, 1]
        member_of[members] = heads[np.argmin(dx * dx + dy * dy, axis=1)]
    return member_of


def round_costs(pop: Population, plan: RoundPlan, bs: BaseStation, params: RadioParams, ratio: float):
    """Nominal per-node debits of one round, split by category.

    Returns ``(categories, benefit_violations)``; the second counts relay
    hops where both legs are short yet the head's amplifier energy is not
    below what direct transmission would cost.
    """
    n = len(pop)
    cat = {name: np.zeros(n) for name in CATEGORIES}
    alive, heads, pos = plan.alive, plan.heads, pop.pos
    info, data = params.info_bits, params.data_bits
    d0 = params.d0
    if len(heads) == 0:
        cat["direct_tx"][alive] = tx_energy(params, data, distances(pos[alive], bs.position))
        return cat, 0

    slot = np.full(n, -1, dtype=np.int64)
    slot[heads] = np.arange(len(heads))
    members = alive[plan.member_of[alive] >= 0]
    ch_of = plan.member_of[members]
    diff = pos[members] - pos[ch_of]
    d_mem = np.sqrt(diff[:, 0] * diff[:, 0] + diff[:, 1] * diff[:, 1])
    n_mem = np.bincount(slot[ch_of], minlength=len(heads))
    radius = np.zeros(len(heads))
    np.maximum.at(radius, slot[ch_of], d_mem)

    cat["broadcast_rx"][alive] = rx_energy(params, info)
    if plan.ch_announce:
        cat["announce_tx"][heads] = tx_energy(params, info, radius)
    cat["assoc_tx"][members] = tx_energy(params, info, d_mem)
    cat["assoc_rx"][heads] = rx_energy(params, info) * n_mem
    has = n_mem > 0
    cat["tdma_tx"][heads[has]] = tx_energy(params, info, radius[has])
    cat["data_tx"][members] = tx_energy(params, data, d_mem)
    cat["data_rx"][heads] = rx_energy(params, data) * n_mem
    cat["aggregation"][heads] = aggregation_energy(params, data, n_mem + 1)

    bits = compressed_bits(n_mem, data, ratio)
    bx, by = bs.position
    violations = 0
    for i, h in enumerate(heads.tolist()):
        k = int(bits[i])
        hops = (h, *plan.routes.get(h, ()))
        legs = []
        for a, b in zip(hops, hops[1:] + (None,)):
            tx_at = (bx, by) if b is None else pos[b]
            dx = float(pos[a, 0] - tx_at[0])
            dy = float(pos[a, 1] - tx_at[1])
            legs.append(math.sqrt(dx * dx + dy * dy))
        cat["ch_tx"][h] += tx_energy(params, k, legs[0])
        for relay, leg in zip(hops[1:], legs[1:]):
            cat["relay_rx"][relay] += rx_energy(params, k)
            cat["relay_tx"][relay] += tx_energy(params, k, leg)
        if len(hops) > 1 and max(legs) < d0:
            dx = float(pos[h, 0] - bx)
            dy = float(pos[h, 1] - by)
            direct = math.sqrt(dx * dx + dy * dy)
            if not amplifier_energy(params, k, legs[0]) < amplifier_energy(params, k, direct):
                violations += 1
    return cat, violations


def total_cost(cat) -> np.ndarray:
    total = np.zeros_like(cat[CATEGORIES[0]])
    for name in CATEGORIES:
        total = total + cat[name]
    return total
