"""Union bounds on the frame error rate and a low-weight codeword harvester.

The pairwise error probability between the transmitted word and a competitor
at punctured (input) weight a and transmitted (output) weight b has a closed
form: conditioned on the overlap E between the competitor's flipped sparse
positions and the k ones of the true sparse word, the decision statistic is
Gaussian, and E is hypergeometric(h, k, a). Summing the exact hypergeometric
expectation of the Q-function gives pep(a, b).

Weighting pep by an input-output weight enumerator produces a union bound:
the ensemble-average enumerator gives the average-FER bound, a concrete
code's harvested low-weight list gives the code-specific truncated union
bound (TUB) that FER curves meet in the error-floor region.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc
from scipy.stats import hypergeom

from .channels import ChannelParams, apriori_llr
from .decoder import DecoderConfig, bp_decode
from .lifting import LiftedCode
from .matcher import DmConfig
from .spectrum import _as_proto, avg_io_weight_table


def _qfunc(x):
    return 0.5 * erfc(x / np.sqrt(2.0))


def pep(a: int, b: int, cfg: DmConfig, params: ChannelParams) -> float:
    """Pairwise error probability for a competitor at weights (a, b).

    Exact expectation over the hypergeometric overlap E ~ HG(h, k, a) of
    Q((2b/sigma^2 + (a-2E)*Delta) / (2 sqrt(b)/sigma)), with Delta the sparse
    prior LLR ln((1-omega)/omega). b = 0 degenerates to the prior-only
    comparison, resolved by the sign of (a-2E) with ties split evenly.
    """
    if a < 0 or b < 0 or a > cfg.h:
        raise ValueError(f"invalid weights a={a}, b={b} for h={cfg.h}")
    if a == 0 and b == 0:
        return 0.0
    sigma = params.sigma
    delta = apriori_llr(cfg.omega)
    e_lo = max(0, a - (cfg.h - cfg.k))
    e_hi = min(a, cfg.k)
    e = np.arange(e_lo, e_hi + 1)
    pmf = hypergeom.pmf(e, cfg.h, cfg.k, a)
    drift = (a - 2.0 * e) * delta
    if b == 0:
        vals = np.where(drift < 0.0, 1.0, np.where(drift == 0.0, 0.5, 0.0))
    else:
        arg = (2.0 * b / sigma**2 + drift) * sigma / (2.0 * np.sqrt(b))
        vals = _qfunc(arg)
    return float(np.dot(pmf, vals))


@dataclass(frozen=True)
class UnionBound:
    """Truncated ensemble-average union bound with per-term contributions."""

    value: float
    terms: tuple          # (a, b, avg_count, pep) per retained term
    a_cap: int
    b_cap: int
    note: str

    def __float__(self) -> float:
        return self.value


def union_bound_ensemble(p, ell: int, omega: float, params: ChannelParams,
                         weight_cap: tuple,
                         max_terms: int = 2_000_000) -> UnionBound:
    """Average-FER union bound over the lift ensemble, truncated at weight_cap.

    Sum of avg enumerator x pep over 0 <= a <= a_cap, 0 <= b <= b_cap,
    skipping (0,0). The DM composition is k = round(omega * h) ones in
    h = h0 * ell sparse positions.
    """
    a_cap, b_cap = int(weight_cap[0]), int(weight_cap[1])
    note = f"truncated at a<={a_cap}, b<={b_cap}"
    if a_cap == 0 and b_cap == 0:
        return UnionBound(0.0, (), 0, 0, note + " (empty)")
    table = avg_io_weight_table(p, ell, a_cap, b_cap, max_terms=max_terms)
    proto = _as_proto(p)
    h = proto.h0 * ell
    k = max(1, round(omega * h))
    cfg = DmConfig(h, k)
    terms = []
    total = 0.0
    for (a, b), cnt in sorted(table.items()):
        if a == 0 and b == 0:
            continue
        c = float(cnt)
        if c == 0.0:
            continue
        pr = pep(a, b, cfg, params)
        terms.append((a, b, c, pr))
        total += c * pr
    return UnionBound(float(total), tuple(terms), a_cap, b_cap, note)


# ---------------------------------------------------------------------------
# low-weight codeword search and the code-specific TUB
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumList:
    """Deduplicated (input weight, output weight, multiplicity) triples."""

    entries: tuple

    def __post_init__(self):
        seen = set()
        for a, b, m in self.entries:
            if a < 1 and b < 1:
                raise ValueError("zero-weight entry")
            if m < 1:
                raise ValueError("multiplicity must be >= 1")
            if (a, b) in seen:
                raise ValueError(f"duplicate entry ({a}, {b})")
            seen.add((a, b))

    @staticmethod
    def from_counts(counts: dict) -> "SpectrumList":
        ent = tuple(sorted((int(a), int(b), int(m))
                           for (a, b), m in counts.items()))
        return SpectrumList(entries=ent)

    def merge(self, other: "SpectrumList") -> "SpectrumList":
        acc: dict = {}
        for a, b, m in self.entries + other.entries:
            acc[(a, b)] = acc.get((a, b), 0) + m
        return SpectrumList.from_counts(acc)

    def min_total_weight(self):
        return min((a + b for a, b, _ in self.entries), default=None)

    def to_json(self) -> dict:
        return {"entries": [[a, b, m] for a, b, m in self.entries]}

    @staticmethod
    def from_json(d: dict) -> "SpectrumList":
        return SpectrumList(entries=tuple(tuple(int(v) for v in row)
                                          for row in d["entries"]))


def low_weight_search(code: LiftedCode, effort: int = 30000, seed: int = 0,
                      ramp: tuple = (1.4, 1.0, 0.7), impulse: float = -12.0,
                      max_iterations: int = 60) -> SpectrumList:
    """Error-impulse harvest of the lower tail of the code's weight spectrum.

    All LLRs start at a correct-sign background magnitude, then a small
    subset of positions (sizes 1..3) is hit with a strong wrong-sign
    impulse. BP converges either back to the zero word or onto a nearby
    nonzero codeword; the nonzero ones are collected, deduplicated by
    support, and tallied as (punctured weight, transmitted weight,
    multiplicity). The ramp descends through background magnitudes: strong
    backgrounds only surrender to the very closest codewords, weak ones
    open wider basins. (Scaling the impulse with the background instead is
    nearly a no-op: BP is insensitive to a common LLR scale until clipping
    bites, so the basin never opens.) The result is a lower tail sample,
    not a complete spectrum. effort caps the total number of BP runs
    (subsets x ramp levels); singletons are exhaustive, pairs and triples
    randomized.
    """
    if effort < 1:
        raise ValueError("effort must be >= 1")
    rng = np.random.default_rng(seed)
    nv = code.num_vns
    dec_cfg = DecoderConfig(max_iterations=max_iterations)
    found: set = set()
    runs = 0

    def trial(positions, base) -> bool:
        nonlocal runs
        L = np.full(nv, base, dtype=np.float64)
        L[list(positions)] = impulse
        res = bp_decode(L, code, dec_cfg)
        runs += 1
        if res.syndrome_ok:
            w = np.concatenate([res.v_hat, res.c_hat])
            if w.any():
                found.add(tuple(np.flatnonzero(w)))
        return runs >= effort

    done = False
    for base in ramp:
        for pos in range(nv):
            if trial((pos,), base):
                done = True
                break
        if done:
            break
    while not done:
        size = int(rng.integers(2, 4))
        pos = tuple(rng.choice(nv, size=size, replace=False))
        for base in ramp:
            if trial(pos, base):
                done = True
                break

    counts: dict = {}
    for supp in found:
        a = sum(1 for i in supp if i < code.h)
        b = len(supp) - a
        counts[(a, b)] = counts.get((a, b), 0) + 1
    return SpectrumList.from_counts(counts)


def tub_code(slist: SpectrumList, cfg: DmConfig, params: ChannelParams) -> float:
    """Code-specific truncated union bound: sum of multiplicity x pep."""
    if not slist.entries:
        raise ValueError("empty spectrum list")
    return float(sum(m * pep(a, b, cfg, params) for a, b, m in slist.entries))
