"""Round loop, lifetime metrics and multi-seed protocol comparison."""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import rulebases
from .network import BaseStation, HeterogeneityConfig, deploy, formation_cost, total_initial_energy
from .protocols import (
    CATEGORIES,
    PROTOCOLS,
    EdeecParams,
    EdeecProtocol,
    FuzzyProtocol,
    LeachParams,
    LeachProtocol,
    RoundMetrics,
    round_costs,
)
from .protocols.baselines import class_surplus, round_estimate
from .protocols.common import total_cost
from .radio import RadioParams


@dataclass(frozen=True)
class SimConfig:
    protocol: str = "fuzzy"
    seed: int = 1
    rounds: int = 5000
    width: float = 100.0
    height: float = 100.0
    bs: BaseStation = BaseStation()
    k: int = 5
    compression: float = 0.05
    kmeans_max_iter: int = 100
    kmeans_n_init: int = 1
    radio: RadioParams = RadioParams()
    network: HeterogeneityConfig = HeterogeneityConfig()
    leach_p: float = 0.05
    edeec_p: float = 0.05
    # "auto" derives R from the deployment (DEEC estimator); a number fixes it
    edeec_r_estimate: float | str = "auto"
    edeec_normalization: str = "energy"
    edeec_a: float | None = None
    edeec_b: float | None = None
    # name -> (universe, ((label, (shape, points)), ...)); battery variables in E_super fractions
    fuzzy_sets: dict = field(default_factory=dict)
    election_table: tuple = rulebases.ELECTION_TABLE
    relay_table: tuple = rulebases.RELAY_TABLE
    election_centroids: tuple = tuple(zip(rulebases.ELECTION_LABELS, rulebases.ELECTION_CENTROIDS))
    relay_centroids: tuple = tuple(zip(rulebases.RELAY_LABELS, rulebases.RELAY_CENTROIDS))

    def validate(self) -> SimConfig:
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}; choose from {', '.join(PROTOCOLS)}")
        if self.rounds < 1:
            raise ValueError("rounds must be at least 1")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("field dimensions must be positive")
        if not 0.0 < self.compression <= 1.0:
            raise ValueError("compression must lie in (0, 1]")
        if self.kmeans_max_iter < 1:
            raise ValueError("kmeans_max_iter must be at least 1")
        if self.kmeans_n_init < 1:
            raise ValueError("kmeans_n_init must be at least 1")
        LeachParams(self.leach_p)
        if isinstance(self.edeec_r_estimate, str) and self.edeec_r_estimate != "auto":
            raise ValueError("edeec_r_estimate must be a positive number or 'auto'")
        self.edeec_params()
        self.election_base()
        self.relay_base()
        return self

    def election_base(self):
        return rulebases.election_base(self.network.e_super, self.fuzzy_sets, self.election_table,
                                       self.election_centroids)

    def relay_base(self):
        return rulebases.relay_base(self.network.e_super, self.fuzzy_sets, self.relay_table,
                                    self.relay_centroids)

    def edeec_params(self, r_estimate: float | None = None) -> EdeecParams:
        a, b = class_surplus(*self.network.class_energies)
        if r_estimate is None:
            r_estimate = 5000.0 if self.edeec_r_estimate == "auto" else float(self.edeec_r_estimate)
        return EdeecParams(
            p_opt=self.edeec_p,
            mf=self.network.mf,
            mp=self.network.mp,
            a=a if self.edeec_a is None else self.edeec_a,
            b=b if self.edeec_b is None else self.edeec_b,
            r_estimate=r_estimate,
            normalization=self.edeec_normalization,
        )


@dataclass
class RoundTrace:
    round: int
    heads: tuple[int, ...]
    sizes: tuple[int, ...]
    dist_bs: tuple[float, ...]
    head_scores: tuple[float, ...]
    relay_map: dict[int, int]
    routes: dict[int, tuple[int, ...]]


@dataclass
class RunSummary:
    protocol: str
    seed: int
    fnd: int | None
    rounds_simulated: int
    final_alive: int
    metrics: list[RoundMetrics]
    deployment_checksum: str = ""
    initial_energy_j: float = 0.0
    formation_j: float = 0.0
    traces: list[RoundTrace] = field(default_factory=list)

    @property
    def max_ledger_error(self) -> float:
        return max((m.ledger_error for m in self.metrics), default=0.0)

    def alive_series(self) -> np.ndarray:
        return np.array([m.alive for m in self.metrics])

    def residual_series(self) -> np.ndarray:
        return np.array([m.residual_j for m in self.metrics])


class ExactSum:
    """Running sum without accumulated rounding error (Shewchuk partials)."""

    def __init__(self):
        self.partials: list[float] = []

    def add(self, x: float) -> None:
        i = 0
        for y in self.partials:
            if abs(x) < abs(y):
                x, y = y, x
            hi = x + y
            lo = y - (hi - x)
            if lo:
                self.partials[i] = lo
                i += 1
            x = hi
        self.partials[i:] = [x]

    def value(self) -> float:
        return math.fsum(self.partials)


def rng_streams(seed: int, protocol: str):
    """Deployment stream (shared by all protocols for a seed) and protocol stream."""
    deployment = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    proto = np.random.default_rng(np.random.SeedSequence([seed, 1, PROTOCOLS.index(protocol)]))
    return deployment, proto


def edeec_r_estimate(cfg: SimConfig, pop, total_initial: float) -> float:
    if cfg.edeec_r_estimate != "auto":
        return float(cfg.edeec_r_estimate)
    return round_estimate(total_initial, pop.pos, cfg.bs, cfg.radio, cfg.k, cfg.width, cfg.height)


def deployment(cfg: SimConfig):
    """The population a run of ``cfg`` starts from, before the formation report."""
    dep_rng, _ = rng_streams(cfg.seed, cfg.protocol)
    return deploy(cfg.network, cfg.width, cfg.height, dep_rng)


def build_protocol(cfg: SimConfig, pop, total_initial: float, rng):
    n = len(pop)
    if cfg.protocol == "fuzzy":
        return FuzzyProtocol(cfg.k, cfg.bs, cfg.radio, cfg.election_base(), cfg.relay_base(), rng,
                             cfg.kmeans_max_iter, cfg.kmeans_n_init)
    if cfg.protocol == "leach":
        return LeachProtocol(n, LeachParams(cfg.leach_p), rng)
    params = cfg.edeec_params(edeec_r_estimate(cfg, pop, total_initial))
    return EdeecProtocol(n, params, total_initial, rng)


def simulate(cfg: SimConfig, trace: bool = False) -> RunSummary:
    """Deploy, charge the one-off formation report, then play up to ``cfg.rounds`` rounds.

    Rounds are numbered from 1. After the last node dies the remaining
    rounds are recorded as all-zero rows so series from different runs align.
    """
    cfg.validate()
    _, proto_rng = rng_streams(cfg.seed, cfg.protocol)
    pop = deployment(cfg)
    initial = total_initial_energy(pop).total
    spent = ExactSum()
    formation = pop.debit(formation_cost(pop, cfg.bs, cfg.radio))
    spent.add(math.fsum(formation.tolist()))
    protocol = build_protocol(cfg, pop, initial, proto_rng)

    fnd = 0 if len(pop) and not pop.alive.all() else None
    metrics: list[RoundMetrics] = []
    traces: list[RoundTrace] = []
    simulated = 0
    for r in range(1, cfg.rounds + 1):
        if not pop.alive.any():
            metrics.append(RoundMetrics(r, 0, 0.0, 0, 0))
            continue
        simulated = r
        plan = protocol.plan(pop, r)
        cat, violations = round_costs(pop, plan, cfg.bs, cfg.radio, cfg.compression)
        was_alive = pop.alive
        taken = pop.debit(total_cost(cat))
        consumed = math.fsum(taken.tolist())
        spent.add(consumed)
        residual = math.fsum(pop.energy.tolist())
        dead = np.flatnonzero(was_alive & ~pop.alive)
        if fnd is None and len(dead):
            fnd = r
        metrics.append(RoundMetrics(
            round=r,
            alive=int(pop.alive.sum()),
            residual_j=residual,
            ch_count=len(plan.heads),
            relay_count=len(plan.routes),
            dead_ids=tuple(dead.tolist()),
            energy_by_category={name: math.fsum(cat[name].tolist()) for name in CATEGORIES},
            consumed_j=consumed,
            ledger_error=abs(initial - spent.value() - residual),
            unrelayed=len(plan.unrelayed),
            relay_benefit_violations=violations,
        ))
        if trace:
            sizes = plan.cluster_sizes()
            heads = plan.heads.tolist()
            d = np.sqrt(((pop.pos[plan.heads] - np.array(cfg.bs.position)) ** 2).sum(axis=1))
            traces.append(RoundTrace(
                round=r,
                heads=tuple(heads),
                sizes=tuple(sizes[h] for h in heads),
                dist_bs=tuple(d.tolist()),
                head_scores=tuple(plan.scores.get(h, math.nan) for h in heads),
                relay_map=dict(plan.relay_map),
                routes=dict(plan.routes),
            ))
    return RunSummary(
        protocol=cfg.protocol,
        seed=cfg.seed,
        fnd=fnd,
        rounds_simulated=simulated,
        final_alive=int(pop.alive.sum()),
        metrics=metrics,
        deployment_checksum=pop.checksum(),
        initial_energy_j=initial,
        formation_j=math.fsum(formation.tolist()),
        traces=traces,
    )


def _run(job):
    cfg, trace = job
    return simulate(cfg, trace)


def seed_list(base_seed: int, seeds) -> list[int]:
    if isinstance(seeds, int):
        if seeds < 1:
            raise ValueError("need at least one seed")
        return [base_seed + i for i in range(seeds)]
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    return seeds


def censored_fnd(summary: RunSummary, rounds: int) -> int:
    """FND, counting a run in which nobody died as ``rounds + 1``."""
    return rounds + 1 if summary.fnd is None else summary.fnd


@dataclass
class Comparison:
    rounds: int
    protocols: list[str]
    seeds: list[int]
    runs: dict[tuple[str, int], RunSummary]

    def fnd(self, protocol: str, seed: int) -> int:
        return censored_fnd(self.runs[(protocol, seed)], self.rounds)

    def median_fnd(self, protocol: str) -> float:
        return statistics.median(self.fnd(protocol, s) for s in self.seeds)

    def table(self) -> list[dict]:
        rows = []
        for p in self.protocols:
            runs = [self.runs[(p, s)] for s in self.seeds]
            rows.append({
                "protocol": p,
                "seeds": len(self.seeds),
                "median_fnd": self.median_fnd(p),
                "min_fnd": min(self.fnd(p, s) for s in self.seeds),
                "max_fnd": max(self.fnd(p, s) for s in self.seeds),
                "median_final_alive": statistics.median(r.final_alive for r in runs),
            })
        return rows


def compare(cfg: SimConfig, protocols, seeds, workers: int = 1, trace: bool = False) -> Comparison:
    """Run every (protocol, seed) pair; deployments are identical across protocols for a seed."""
    protocols = list(protocols)
    if not protocols:
        raise ValueError("need at least one protocol")
    for p in protocols:
        replace(cfg, protocol=p).validate()
    seeds = seed_list(cfg.seed, seeds)
    keys = [(p, s) for p in protocols for s in seeds]
    jobs = [(replace(cfg, protocol=p, seed=s), trace) for p, s in keys]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run, jobs))
    else:
        results = [_run(job) for job in jobs]
    return Comparison(cfg.rounds, protocols, seeds, dict(zip(keys, results)))
