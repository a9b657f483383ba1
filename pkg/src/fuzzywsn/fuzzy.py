"""Product-inference fuzzy engine with center-average defuzzification.

A :class:`RuleBase` maps crisp inputs to a crisp score::

    y = sum_l(w_l * c_l) / sum_l(w_l)

where ``w_l`` is the product of rule ``l``'s antecedent membership degrees
and ``c_l`` is the representative centroid of its consequent label.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import _kernels


class FuzzyConfigError(ValueError):
    """A membership function, variable or rule base is malformed."""


class NoRuleFired(RuntimeError):
    """Every rule had zero firing strength for the given inputs."""


@dataclass(frozen=True)
class MembershipFunction:
    kind: str
    points: tuple[float, ...]

    def __post_init__(self):
        expected = {"triangular": 3, "trapezoidal": 4}.get(self.kind)
        if expected is None:
            raise FuzzyConfigError(f"unknown membership shape {self.kind!r}")
        if len(self.points) != expected:
            raise FuzzyConfigError(f"{self.kind} needs {expected} breakpoints, got {len(self.points)}")
        if not all(math.isfinite(p) for p in self.points):
            raise FuzzyConfigError(f"non-finite breakpoint in {self.points}")
        if any(a > b for a, b in zip(self.points, self.points[1:])):
            raise FuzzyConfigError(f"breakpoints must be non-decreasing: {self.points}")

    @property
    def params(self) -> tuple[float, float, float, float]:
        """Breakpoints as a trapezoid; a triangle is a trapezoid with b == c."""
        if self.kind == "triangular":
            a, b, c = self.points
            return (a, b, b, c)
        return tuple(self.points)

    def degree(self, x: float) -> float:
        return _kernels._pykernels.membership(x, *self.params)

    def scaled(self, factor: float) -> MembershipFunction:
        return MembershipFunction(self.kind, tuple(p * factor for p in self.points))


def triangular(a, b, c) -> MembershipFunction:
    return MembershipFunction("triangular", (float(a), float(b), float(c)))


def trapezoidal(a, b, c, d) -> MembershipFunction:
    return MembershipFunction("trapezoidal", (float(a), float(b), float(c), float(d)))


def membership_degree(mf: MembershipFunction, x: float) -> float:
    return mf.degree(x)


@dataclass(frozen=True)
class LinguisticVariable:
    """A named input universe covered by ordered fuzzy sets.

    Label order carries meaning (Low < Moderate < High) and is what the
    rule-table monotonicity checks rely on.
    """

    name: str
    universe: tuple[float, float]
    sets: tuple[tuple[str, MembershipFunction], ...]
    unit: str = ""

    def __post_init__(self):
        lo, hi = self.universe
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise FuzzyConfigError(f"{self.name}: bad universe {self.universe}")
        labels = self.labels
        if len(set(labels)) != len(labels):
            raise FuzzyConfigError(f"{self.name}: duplicate labels {labels}")
        gap = self.coverage_gap()
        if gap is not None:
            raise FuzzyConfigError(f"{self.name}: no fuzzy set covers x={gap:g}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.sets)

    def mf(self, label: str) -> MembershipFunction:
        for name, mf in self.sets:
            if name == label:
                return mf
        raise FuzzyConfigError(f"{self.name}: unknown label {label!r}")

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise FuzzyConfigError(f"{self.name}: unknown label {label!r}") from None

    def clamp(self, x: float) -> float:
        lo, hi = self.universe
        return min(max(x, lo), hi)

    def fuzzify(self, x: float) -> dict[str, float]:
        x = self.clamp(x)
        return {label: mf.degree(x) for label, mf in self.sets}

    def coverage_gap(self) -> float | None:
        """First point of the universe where every set has degree 0, if any.

        Degrees are piecewise linear, so checking each breakpoint and the
        midpoint of every gap between breakpoints is exhaustive.
        """
        lo, hi = self.universe
        knots = {lo, hi}
        for _, mf in self.sets:
            knots.update(p for p in mf.points if lo <= p <= hi)
        knots = sorted(knots)
        probes = knots + [(a + b) / 2 for a, b in zip(knots, knots[1:])]
        for x in sorted(probes):
            if all(mf.degree(x) == 0.0 for _, mf in self.sets):
                return x
        return None


@dataclass(frozen=True)
class FuzzyRule:
    antecedents: tuple[str, ...]
    consequent: str


@dataclass(frozen=True)
class RuleBase:
    """Input variables, rules and one crisp centroid per output label."""

    name: str
    inputs: tuple[LinguisticVariable, ...]
    output: str
    centroids: tuple[tuple[str, float], ...]
    rules: tuple[FuzzyRule, ...]
    universe: tuple[float, float] = (0.0, 100.0)
    _arrays: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        lo, hi = self.universe
        out_labels = [label for label, _ in self.centroids]
        if len(set(out_labels)) != len(out_labels):
            raise FuzzyConfigError(f"{self.name}: duplicate output labels")
        for label, c in self.centroids:
            if not lo <= c <= hi:
                raise FuzzyConfigError(f"{self.name}: centroid {label}={c} outside {self.universe}")
        for n, rule in enumerate(self.rules, 1):
            if len(rule.antecedents) != len(self.inputs):
                raise FuzzyConfigError(f"{self.name} rule {n}: expected {len(self.inputs)} antecedents")
            for var, label in zip(self.inputs, rule.antecedents):
                var.index(label)
            if rule.consequent not in out_labels:
                raise FuzzyConfigError(f"{self.name} rule {n}: unknown output label {rule.consequent!r}")

    @property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.inputs)

    @property
    def output_labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.centroids)

    def centroid(self, label: str) -> float:
        return dict(self.centroids)[label]

    def is_total(self) -> bool:
        """True when every combination of input labels has exactly one rule."""
        seen = [r.antecedents for r in self.rules]
        full = set(itertools.product(*(v.labels for v in self.inputs)))
        return len(seen) == len(full) and set(seen) == full

    def lookup(self, *antecedents: str) -> str:
        for rule in self.rules:
            if rule.antecedents == tuple(antecedents):
                return rule.consequent
        raise KeyError(antecedents)

    def arrays(self):
        """Dense arrays consumed by the batch kernel (cached)."""
        if not self._arrays:
            nl = max(len(v.sets) for v in self.inputs)
            mf = np.zeros((len(self.inputs), nl, 4))
            # unused label slots never fire
            mf[:, :, :] = np.inf
            for i, var in enumerate(self.inputs):
                for j, (_, m) in enumerate(var.sets):
                    mf[i, j] = m.params
            self._arrays.update(
                lo=np.array([v.universe[0] for v in self.inputs]),
                hi=np.array([v.universe[1] for v in self.inputs]),
                mf=mf,
                rules=np.array([[v.index(a) for v, a in zip(self.inputs, r.antecedents)] for r in self.rules],
                               dtype=np.int64).reshape(len(self.rules), len(self.inputs)),
                centroids=np.array([self.centroid(r.consequent) for r in self.rules]),
            )
        return self._arrays

    def _crisp(self, inputs) -> list[float]:
        if isinstance(inputs, Mapping):
            try:
                inputs = [inputs[name] for name in self.variable_names]
            except KeyError as exc:
                raise FuzzyConfigError(f"{self.name}: missing input {exc.args[0]!r}") from None
        inputs = [float(x) for x in inputs]
        if len(inputs) != len(self.inputs):
            raise FuzzyConfigError(f"{self.name}: expected {len(self.inputs)} inputs, got {len(inputs)}")
        return inputs


def fire_rule(rb: RuleBase, rule: FuzzyRule, inputs) -> float:
    """Firing strength: product of the antecedent degrees at clamped inputs."""
    strength = 1.0
    for var, label, x in zip(rb.inputs, rule.antecedents, rb._crisp(inputs)):
        strength *= var.mf(label).degree(var.clamp(x))
    return strength


def aggregate(strengths: Sequence[float], centroids: Sequence[float]) -> float:
    """Center-average of rule centroids weighted by firing strength."""
    num = 0.0
    den = 0.0
    for s, c in zip(strengths, centroids):
        num += s * c
        den += s
    if den <= 0.0:
        raise NoRuleFired("no rule fired")
    return num / den


def infer(rb: RuleBase, inputs) -> float:
    """Crisp output for one input vector (sequence in variable order, or mapping)."""
    crisp = rb._crisp(inputs)
    strengths = [fire_rule(rb, rule, crisp) for rule in rb.rules]
    try:
        return aggregate(strengths, [rb.centroid(r.consequent) for r in rb.rules])
    except NoRuleFired:
        raise NoRuleFired(f"{rb.name}: no rule fired at {dict(zip(rb.variable_names, crisp))}") from None


def infer_batch(rb: RuleBase, inputs) -> np.ndarray:
    """Vectorised :func:`infer` over the rows of an (m, n_inputs) array."""
    x = np.asarray(inputs, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != len(rb.inputs):
        raise FuzzyConfigError(f"{rb.name}: expected shape (m, {len(rb.inputs)}), got {x.shape}")
    a = rb.arrays()
    y = _kernels.infer_batch(x, a["lo"], a["hi"], a["mf"], a["rules"], a["centroids"])
    if np.isnan(y).any():
        row = int(np.flatnonzero(np.isnan(y))[0])
        raise NoRuleFired(f"{rb.name}: no rule fired at {dict(zip(rb.variable_names, x[row].tolist()))}")
    return y


def surface_grid(rb: RuleBase, resolution: int, fixed: Mapping[str, float] | None = None):
    """Evaluate the base on a regular lattice over two free input universes.

    Bases with more than two inputs need the extra ones pinned in ``fixed``.
    Returns ``(free_names, rows)`` with rows ``(x1, x2, output)``; ``x1``
    varies slowest.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    fixed = dict(fixed or {})
    unknown = set(fixed) - set(rb.variable_names)
    if unknown:
        raise FuzzyConfigError(f"{rb.name}: unknown variable(s) {sorted(unknown)}")
    free = [v for v in rb.inputs if v.name not in fixed]
    if len(free) != 2:
        raise FuzzyConfigError(
            f"{rb.name}: need exactly two free inputs, have {[v.name for v in free]}; pin the rest with fixed="
        )
    axes = [np.linspace(v.universe[0], v.universe[1], resolution) for v in free]
    pairs = [(float(a), float(b)) for a in axes[0] for b in axes[1]]
    cols = []
    for var in rb.inputs:
        if var.name in fixed:
            cols.append(np.full(len(pairs), float(fixed[var.name])))
        else:
            cols.append(np.array([p[free.index(var)] for p in pairs]))
    y = infer_batch(rb, np.column_stack(cols))
    return [v.name for v in free], [(a, b, float(out)) for (a, b), out in zip(pairs, y)]
