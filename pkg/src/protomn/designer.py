"""Worst-case-loss objective and differential-evolution ensemble design.

A rate-adaptive scheme holds one inner mother code and sweeps the outer
matcher's density, so the figure of merit for a base matrix is the largest
gap to the Shannon limit over the whole target rate set (the worst-case
loss, WCL). The search explores integer base matrices with a standard
rand/1/bin differential evolution loop, rounding and repairing candidates
back onto the valid-matrix lattice. PEXIT thresholds keep the inner loop
fast; the quantized-DE threshold at the lowest target rate, where PEXIT is
known to be optimistic, re-ranks the short list at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import shannon_limit_inverse
from .de import NoConvergenceInBracketError, threshold_search
from .matcher import omega_for_rate
from .protograph import (BaseMatrix, BaseMatrixError, DEFAULT_ENTRY_CAP,
                         Protograph, validate_base_matrix)
from .spectrum import SolverDivergedError, classify_ensemble


@dataclass(frozen=True)
class RateGap:
    rate: float
    gamma_db: float
    shannon_db: float

    @property
    def gap_db(self) -> float:
        return self.gamma_db - self.shannon_db


@dataclass(frozen=True)
class WclResult:
    wcl_db: float
    gaps: tuple  # RateGap per target rate

    def __float__(self) -> float:
        return self.wcl_db


def wcl(p, rates, method: str = "quantized_de", **kwargs) -> WclResult:
    """Worst-case loss: max over the rate set of threshold minus Shannon limit."""
    if isinstance(p, BaseMatrix):
        base = p
        proto = p.protograph()
    else:
        proto = p
        base = p.base
    gaps = []
    for r in sorted(rates):
        om = omega_for_rate(float(r), base.rate_inner)
        gamma = threshold_search(proto, om, method=method, **kwargs)
        gaps.append(RateGap(rate=float(r), gamma_db=gamma,
                            shannon_db=shannon_limit_inverse(float(r))))
    return WclResult(wcl_db=max(g.gap_db for g in gaps), gaps=tuple(gaps))


@dataclass(frozen=True)
class DesignSpec:
    h0: int
    n0: int
    rate_set: tuple
    entry_cap: int = DEFAULT_ENTRY_CAP
    require_good: bool = False
    de_refine: bool = True
    refine_top: int = 8
    population: int = 40
    generations: int = 200
    crossover_rate: float = 0.9
    mutation_factor: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if self.h0 < 1 or self.n0 < 1:
            raise ValueError("h0 and n0 must be >= 1")
        # R = h0/n0 itself is reachable in the limit (omega = 1/2)
        limit = self.h0 / self.n0
        for r in self.rate_set:
            if not 0.0 < r <= limit:
                raise ValueError(f"rate {r} outside (0, {self.h0}/{self.n0}]")
        if self.generations > 0 and self.population < 8:
            raise ValueError("population must be >= 8 for an evolving search")
        if not self.rate_set:
            raise ValueError("rate_set must be nonempty")


@dataclass(frozen=True)
class DesignCandidate:
    base: BaseMatrix
    wcl_db: float
    classification: str
    gaps: tuple


def _repair(genome: np.ndarray, spec: DesignSpec,
            rng: np.random.Generator) -> np.ndarray:
    """Round and clip a real genome onto the valid base-matrix lattice."""
    g = np.clip(np.rint(genome), 0, spec.entry_cap).astype(np.int64)
    width = spec.h0 + spec.n0
    for i in range(spec.n0):
        if not g[i].any():
            g[i, rng.integers(width)] = 1
    for j in range(width):
        if not g[:, j].any():
            g[rng.integers(spec.n0), j] = 1
    return g


def _random_genome(spec: DesignSpec, rng: np.random.Generator) -> np.ndarray:
    g = rng.integers(0, spec.entry_cap + 1,
                     size=(spec.n0, spec.h0 + spec.n0)).astype(np.float64)
    return _repair(g, spec, rng)


class _FitnessCache:
    def __init__(self, spec: DesignSpec):
        self.spec = spec
        self.table: dict = {}

    def __call__(self, genome: np.ndarray):
        key = genome.astype(np.int64).tobytes()
        if key in self.table:
            return self.table[key]
        out = self._evaluate(genome)
        self.table[key] = out
        return out

    def _evaluate(self, genome):
        spec = self.spec
        try:
            base = validate_base_matrix(genome.astype(np.int64).tolist(), spec.h0,
                                        entry_cap=spec.entry_cap)
        except BaseMatrixError:
            return float("inf"), None, None, "invalid"
        cls = "unchecked"
        if spec.require_good:
            try:
                cls = classify_ensemble(base.protograph())
            except SolverDivergedError:
                cls = "undetermined"
            if cls != "good":
                return float("inf"), base, None, cls
        try:
            res = wcl(base, spec.rate_set, method="pexit")
        except (NoConvergenceInBracketError, ValueError):
            return float("inf"), base, None, cls
        return res.wcl_db, base, res.gaps, cls


def design_search(spec: DesignSpec, initial=None) -> list:
    """Differential evolution over base matrices; returns ranked candidates.

    rand/1/bin with round-and-clip repair, elitist replacement, fitness =
    PEXIT worst-case loss (infinite for invalid or, with require_good, for
    non-good ensembles). With de_refine the refine_top best survivors get
    their lowest-rate threshold recomputed by quantized DE before the final
    ranking. Deterministic for a fixed spec and seed.
    """
    rng = np.random.default_rng(spec.seed)
    fitness = _FitnessCache(spec)
    pop = []
    if initial:
        for bm in initial:
            pop.append(np.array(bm.entries, dtype=np.float64))
    while len(pop) < spec.population:
        pop.append(_random_genome(spec, rng).astype(np.float64))
    pop = pop[: spec.population]
    fits = [fitness(g)[0] for g in pop]

    npop = len(pop)
    width = spec.h0 + spec.n0
    for _ in range(spec.generations):
        for i in range(npop):
            if npop >= 4:
                choices = [k for k in range(npop) if k != i]
                r1, r2, r3 = rng.choice(choices, size=3, replace=False)
                mutant = pop[r1] + spec.mutation_factor * (pop[r2] - pop[r3])
            else:
                mutant = pop[i] + rng.normal(0, 1, size=pop[i].shape)
            cross = rng.random(size=(spec.n0, width)) < spec.crossover_rate
            cross[rng.integers(spec.n0), rng.integers(width)] = True
            trial = np.where(cross, mutant, pop[i])
            trial = _repair(trial, spec, rng).astype(np.float64)
            f_trial = fitness(trial)[0]
            if f_trial <= fits[i]:
                pop[i] = trial
                fits[i] = f_trial

    evaluated = []
    seen = set()
    for g in pop:
        key = g.astype(np.int64).tobytes()
        if key in seen:
            continue
        seen.add(key)
        f, base, gaps, cls = fitness(g)
        if base is None or not np.isfinite(f):
            continue
        evaluated.append((f, key, base, gaps, cls))
    evaluated.sort(key=lambda t: (t[0], t[1]))

    if spec.de_refine and evaluated:
        low_rate = min(spec.rate_set)
        refined = []
        for f, key, base, gaps, cls in evaluated[: spec.refine_top]:
            try:
                om = omega_for_rate(low_rate, base.rate_inner)
                g_de = threshold_search(base.protograph(), om,
                                        method="quantized_de")
                de_gap = g_de - shannon_limit_inverse(low_rate)
                new_gaps = tuple(
                    RateGap(rate=g.rate, gamma_db=g_de, shannon_db=g.shannon_db)
                    if g.rate == low_rate else g
                    for g in (gaps or ()))
                new_f = max([de_gap] +
                            [g.gap_db for g in new_gaps if g.rate != low_rate])
                refined.append((new_f, key, base, new_gaps, cls))
            except NoConvergenceInBracketError:
                refined.append((float("inf"), key, base, gaps, cls))
        refined.sort(key=lambda t: (t[0], t[1]))
        evaluated = refined + evaluated[spec.refine_top :]

    out = []
    for rank, (f, key, base, gaps, cls) in enumerate(evaluated):
        if not np.isfinite(f):
            continue
        # classification is part of the report for the short list only;
        # tail survivors keep 'unchecked' to bound runtime
        if cls == "unchecked" and rank < spec.refine_top:
            try:
                cls = classify_ensemble(base.protograph())
            except SolverDivergedError:
                cls = "undetermined"
        if spec.require_good and cls != "good":
            continue
        out.append(DesignCandidate(base=base, wcl_db=float(f),
                                   classification=cls, gaps=gaps or ()))
    return out
