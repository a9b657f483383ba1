"""Node population with three energy classes, deployment and the base station."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .geometry import distances
from .radio import RadioParams, tx_energy


class NodeClass(IntEnum):
    NORMAL = 0
    ADVANCED = 1
    SUPER = 2


@dataclass(frozen=True)
class HeterogeneityConfig:
    """Class mix (fractions ``mf``, ``mp``) and per-class initial energies in joules."""

    n: int = 100
    mf: float = 1.0
    mp: float = 0.6
    e: float = 1.0
    e_normal: float = 0.5
    e_advanced: float = 1.0
    e_super: float = 1.5

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("node count must be non-negative")
        for name in ("mf", "mp"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if not 0 < self.e_normal <= self.e_advanced <= self.e_super:
            raise ValueError("class energies must satisfy 0 < normal <= advanced <= super")

    @property
    def class_energies(self) -> tuple[float, float, float]:
        return (self.e_normal, self.e_advanced, self.e_super)


@dataclass(frozen=True)
class BaseStation:
    x: float = 5.0
    y: float = 95.0

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Node:
    id: int
    x: float
    y: float
    cls: NodeClass
    energy: float
    alive: bool


def partition(cfg: HeterogeneityConfig) -> tuple[int, int, int]:
    """Normal/advanced/super counts: floor, floor, remainder."""
    # guard against 39.999999 from binary fractions
    n_normal = math.floor(cfg.n * (1 - cfg.mf) + 1e-9)
    n_adv = math.floor(cfg.n * cfg.mf * (1 - cfg.mp) + 1e-9)
    return n_normal, n_adv, cfg.n - n_normal - n_adv


class Population:
    """Column-oriented node state. Row ``i`` is node id ``i``."""

    def __init__(self, positions, classes, energies):
        self.pos = np.ascontiguousarray(positions, dtype=np.float64).reshape(-1, 2)
        self.cls = np.asarray(classes, dtype=np.int64)
        self.initial = np.array(energies, dtype=np.float64)
        self.energy = self.initial.copy()

    def __len__(self):
        return len(self.energy)

    @property
    def alive(self) -> np.ndarray:
        return self.energy > 0.0

    def alive_ids(self) -> np.ndarray:
        return np.flatnonzero(self.energy > 0.0)

    def debit(self, amounts) -> np.ndarray:
        """Subtract per-node amounts, clamping at zero; returns what was actually taken."""
        amounts = np.asarray(amounts, dtype=np.float64)
        new = np.maximum(self.energy - amounts, 0.0)
        taken = self.energy - new
        self.energy = new
        return taken

    def nodes(self) -> list[Node]:
        return [
            Node(i, float(x), float(y), NodeClass(int(c)), float(e), bool(e > 0.0))
            for i, ((x, y), c, e) in enumerate(zip(self.pos, self.cls, self.energy))
        ]

    def snapshot_rows(self):
        """Rows for ``id,x,y,class,energy,alive`` exports."""
        return [(n.id, n.x, n.y, n.cls.name.lower(), n.energy, int(n.alive)) for n in self.nodes()]

    def checksum(self) -> str:
        h = hashlib.sha256()
        h.update(self.pos.tobytes())
        h.update(self.cls.tobytes())
        h.update(self.initial.tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class EnergyReport:
    total: float
    class_terms: float
    closed_form: float


def total_initial_energy(pop: Population, cfg: HeterogeneityConfig | None = None) -> EnergyReport:
    """Summed initial energy, alongside the textbook expressions for comparison.

    ``class_terms`` sums N(1-mf)E_o + N*mf(1-mp)*2E_o + N*mf*mp*E_o(1+e) and
    ``closed_form`` evaluates N*E_o(1+mf(2+mp*e)). The two disagree
    algebraically, and neither equals the per-class energy sum unless the
    class energies happen to follow them.
    """
    total = math.fsum(pop.initial.tolist())
    if cfg is None:
        return EnergyReport(total, math.nan, math.nan)
    n, eo = cfg.n, cfg.e_normal
    terms = n * (1 - cfg.mf) * eo + n * cfg.mf * (1 - cfg.mp) * 2 * eo + n * cfg.mf * cfg.mp * eo * (1 + cfg.e)
    closed = n * eo * (1 + cfg.mf * (2 + cfg.mp * cfg.e))
    return EnergyReport(total, terms, closed)


def deploy(cfg: HeterogeneityConfig, width: float, height: float, rng) -> Population:
    """Uniform random placement; classes assigned normal, advanced, super by id."""
    if width <= 0 or height <= 0:
        raise ValueError("field dimensions must be positive")
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    xs = rng.uniform(0.0, width, cfg.n)
    ys = rng.uniform(0.0, height, cfg.n)
    counts = partition(cfg)
    classes = np.repeat(np.arange(3), counts)
    energies = np.array(cfg.class_energies)[classes]
    return Population(np.column_stack([xs, ys]), classes, energies)


def formation_cost(pop: Population, bs: BaseStation, params: RadioParams) -> np.ndarray:
    """Per-node energy for reporting position and energy to the BS once at start-up."""
    if len(pop) == 0:
        return np.zeros(0)
    return tx_energy(params, params.info_bits, distances(pop.pos, bs.position))
