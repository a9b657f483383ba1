"""Centralized fuzzy protocol.

Every round the BS clusters the alive nodes with k-means, elects the
best-scoring node of each cluster as head, and gives every head that sits
at or beyond ``d0`` from the BS a relay head chosen by a second fuzzy system.
"""

from __future__ import annotations

import numpy as np

from ..fuzzy import RuleBase, infer_batch
from ..geometry import ClusterLayout, distances, kmeans
from ..network import BaseStation, Population
from .common import RoundPlan, SimulationFinished


def elect_cluster_heads(pop: Population, layout: ClusterLayout, bs: BaseStation, rb: RuleBase,
                        energy=None):
    """Highest election score per cluster; ties go to the lowest id.

    Returns ``(heads, scores)`` where heads are ordered by cluster index and
    ``scores`` maps every scored node id to its crisp output.
    """
    energy = pop.energy if energy is None else energy
    ids = layout.ids
    dist_bs = distances(pop.pos[ids], bs.position)
    scores = infer_batch(rb, np.column_stack([layout.centralities(), energy[ids], dist_bs]))
    heads = []
    for c in range(layout.k):
        idx = np.flatnonzero(layout.labels == c)
        if len(idx) == 0:
            continue
        # ids are sorted, so argmax's first hit is the lowest id
        heads.append(int(ids[idx[np.argmax(scores[idx])]]))
    return np.array(heads, dtype=np.int64), dict(zip(ids.tolist(), scores.tolist()))


def select_relays(pop: Population, heads, bs: BaseStation, rb: RuleBase, d0: float, energy=None):
    """Pick a relay head for every head at distance >= d0 from the BS.

    Candidates are all other heads, scored on (their battery, hop length).
    Among candidates whose hop and onward distance to the BS are both below
    ``d0`` the best score wins; only when none qualifies does the best score
    overall win. Returns ``(relay_map, scores, unrelayed)``.
    """
    energy = pop.energy if energy is None else energy
    heads = np.sort(np.asarray(heads, dtype=np.int64))
    dist_bs = distances(pop.pos[heads], bs.position)
    relay_map, all_scores, unrelayed = {}, {}, []
    for h in heads[dist_bs >= d0].tolist():
        others = heads != h
        cands = heads[others]
        if len(cands) == 0:
            unrelayed.append(h)
            continue
        hop = distances(pop.pos[cands], pop.pos[h])
        s = infer_batch(rb, np.column_stack([energy[cands], hop]))
        all_scores[h] = dict(zip(cands.tolist(), s.tolist()))
        feasible = (hop < d0) & (dist_bs[others] < d0)
        pool = np.flatnonzero(feasible) if feasible.any() else np.arange(len(cands))
        relay_map[h] = int(cands[pool[np.argmax(s[pool])]])
    return relay_map, all_scores, tuple(unrelayed)


def resolve_routes(relay_map: dict[int, int]) -> dict[int, tuple[int, ...]]:
    """Relays each head's payload passes through on the way to the BS.

    A relay that is itself over threshold forwards through its own relay;
    anything deeper than two relays, or looping back, goes direct instead.
    """
    routes = {}
    for h, r in relay_map.items():
        if r not in relay_map:
            routes[h] = (r,)
            continue
        r2 = relay_map[r]
        if r2 not in (h, r) and r2 not in relay_map:
            routes[h] = (r, r2)
    return routes


class FuzzyProtocol:
    name = "fuzzy"

    def __init__(self, k, bs, params, election_rb, relay_rb, rng, max_iter=100, n_init=1):
        self.k = k
        self.bs = bs
        self.params = params
        self.election_rb = election_rb
        self.relay_rb = relay_rb
        self.rng = rng
        self.max_iter = max_iter
        self.n_init = n_init

    def plan(self, pop: Population, round_index: int) -> RoundPlan:
        alive = pop.alive_ids()
        if len(alive) == 0:
            raise SimulationFinished(round_index)
        # election works on last-reported energies, i.e. the round-start snapshot
        energy = pop.energy.copy()
        layout = kmeans(pop.pos[alive], min(self.k, len(alive)), self.rng, ids=alive,
                        max_iter=self.max_iter, n_init=self.n_init)
        heads, scores = elect_cluster_heads(pop, layout, self.bs, self.election_rb, energy)
        relay_map, relay_scores, unrelayed = select_relays(
            pop, heads, self.bs, self.relay_rb, self.params.d0, energy)
        member_of = np.full(len(pop), -1, dtype=np.int64)
        member_of[layout.ids] = heads[layout.labels]
        member_of[heads] = -1
        return RoundPlan(
            alive=alive,
            heads=heads,
            member_of=member_of,
            routes=resolve_routes(relay_map),
            relay_map=relay_map,
            layout=layout,
            scores=scores,
            relay_scores=relay_scores,
            unrelayed=unrelayed,
        )
