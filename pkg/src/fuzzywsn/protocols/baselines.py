"""LEACH and E-DEEC probabilistic cluster-head election.

Both elect heads locally, heads advertise themselves, every other node
joins its nearest head, and heads send straight to the BS.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..network import Population
from ..radio import amplifier_energy
from .common import RoundPlan, SimulationFinished, join_nearest

NEVER = -(10**9)


@dataclass(frozen=True)
class LeachParams:
    p_opt: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.p_opt < 1.0:
            raise ValueError("p_opt must lie in (0, 1)")

    @property
    def epoch(self) -> int:
        return max(1, math.floor(1.0 / self.p_opt + 1e-9))


@dataclass(frozen=True)
class EdeecParams:
    """``a``/``b`` are the advanced/super energy surpluses over a normal node."""

    p_opt: float = 0.05
    mf: float = 1.0
    mp: float = 0.6
    a: float = 1.0
    b: float = 2.0
    r_estimate: float = 5000.0
    min_avg_energy: float = 1e-6
    # "energy": divide by the real energy multiple 1 + mf(a + mp(b - a));
    # "printed": the textbook 1 + mf(a + mp*b)
    normalization: str = "energy"

    def __post_init__(self):
        if not 0.0 < self.p_opt < 1.0:
            raise ValueError("p_opt must lie in (0, 1)")
        if not (self.a >= 0 and self.b >= self.a and self.r_estimate > 0):
            raise ValueError("E-DEEC needs 0 <= a <= b and a positive round estimate")
        if self.normalization not in ("energy", "printed"):
            raise ValueError("normalization must be 'energy' or 'printed'")

    @property
    def multiple(self) -> float:
        """Network energy over an all-normal network of the same size."""
        if self.normalization == "printed":
            return 1.0 + self.mf * (self.a + self.mp * self.b)
        return 1.0 + self.mf * (self.a + self.mp * (self.b - self.a))


def leach_threshold(p: float, r: int) -> float:
    """T(n) = p / (1 - p * (r mod 1/p)), written so the last round of an epoch is exactly 1."""
    epoch = LeachParams(p).epoch
    return 1.0 / (1.0 / p - r % epoch)


def leach_elect(r: int, alive, last_ch, params: LeachParams, rng) -> np.ndarray:
    """Alive nodes elected this round (``r`` counts from 0).

    Nodes that already led since the current epoch began sit out.
    """
    alive = np.asarray(alive, dtype=np.int64)
    epoch_start = r - r % params.epoch
    eligible = last_ch[alive] < epoch_start
    draws = rng.random(len(alive))
    return alive[eligible & (draws < leach_threshold(params.p_opt, r))]


def edeec_average_energy(total_initial: float, n: int, r: int, params: EdeecParams) -> float:
    return max(total_initial / n * (1.0 - r / params.r_estimate), params.min_avg_energy)


def edeec_probabilities(energy, classes, avg_energy: float, params: EdeecParams) -> np.ndarray:
    """p_i = p_opt * w_i * E_i / (multiple * avg) with w in {1, 1+a, 1+b}."""
    weights = np.array([1.0, 1.0 + params.a, 1.0 + params.b])[np.asarray(classes)]
    denom = params.multiple * avg_energy
    return params.p_opt * weights * np.asarray(energy) / denom


def edeec_elect(r: int, alive, energy, classes, last_ch, avg_energy, params: EdeecParams, rng):
    """Alive nodes elected this round under per-node rotating epochs of floor(1/p_i) rounds."""
    alive = np.asarray(alive, dtype=np.int64)
    p = edeec_probabilities(energy[alive], classes[alive], avg_energy, params)
    capped = np.minimum(p, 1.0)
    epoch = np.maximum(np.floor(1.0 / capped + 1e-9), 1.0)
    eligible = (r - last_ch[alive]) >= epoch
    threshold = np.where(p >= 1.0, 1.0, 1.0 / (1.0 / capped - np.mod(r, epoch)))
    draws = rng.random(len(alive))
    return alive[eligible & (draws < threshold)]


class _Baseline:
    name = "baseline"

    def __init__(self, n, rng):
        self.rng = rng
        self.last_ch = np.full(n, NEVER, dtype=np.int64)

    def _elect(self, pop, r, alive):
        raise NotImplementedError

    def plan(self, pop: Population, round_index: int) -> RoundPlan:
        alive = pop.alive_ids()
        if len(alive) == 0:
            raise SimulationFinished(round_index)
        r = round_index - 1
        heads = np.sort(self._elect(pop, r, alive))
        self.last_ch[heads] = r
        return RoundPlan(
            alive=alive,
            heads=heads,
            member_of=join_nearest(pop.pos, alive, heads),
            ch_announce=True,
        )


class LeachProtocol(_Baseline):
    name = "leach"

    def __init__(self, n, params: LeachParams, rng):
        super().__init__(n, rng)
        self.params = params

    def _elect(self, pop, r, alive):
        return leach_elect(r, alive, self.last_ch, self.params, self.rng)


class EdeecProtocol(_Baseline):
    name = "edeec"

    def __init__(self, n, params: EdeecParams, total_initial: float, rng):
        super().__init__(n, rng)
        self.params = params
        self.total_initial = total_initial
        self.n = n

    def _elect(self, pop, r, alive):
        avg = edeec_average_energy(self.total_initial, self.n, r, self.params)
        return edeec_elect(r, alive, pop.energy, pop.cls, self.last_ch, avg, self.params, self.rng)


def round_estimate(total_initial: float, pos, bs, radio, k: int, width: float, height: float) -> float:
    """Network lifetime guess R = E_total / E_round, the DEEC estimator.

    E_round is one round of k clusters with every node reporting: electronics
    for a send and a receive per node, aggregation, members sending over the
    expected cluster radius ``sqrt(area / (2 pi k))`` and heads sending over
    the mean node-to-BS distance.
    """
    n = len(pos)
    bits = radio.data_bits
    d_ch = math.sqrt(width * height / (2.0 * math.pi * k))
    d_bs = float(np.mean(np.hypot(pos[:, 0] - bs.x, pos[:, 1] - bs.y)))
    e_round = bits * (2.0 * n * radio.e_elec + n * radio.e_da) + n * amplifier_energy(radio, bits, d_ch) \
        + k * amplifier_energy(radio, bits, d_bs)
    return total_initial / e_round


def class_surplus(e_normal, e_advanced, e_super):
    """E-DEEC's (a, b) from per-class energies: E_adv = E_o(1+a), E_super = E_o(1+b)."""
    return e_advanced / e_normal - 1.0, e_super / e_normal - 1.0

