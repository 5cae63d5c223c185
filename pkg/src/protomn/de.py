"""Decoding thresholds by quantized density evolution and protograph EXIT.

Both analyses run at the protograph (edge-type) level under the all-zero
codeword assumption of the equivalent-parallel-channel model: transmitted
variable-node types see biAWGN LLRs, punctured types see the sparse-word
prior, which is a two-point mass at +-Delta with Delta = ln((1-omega)/omega)
(probability 1-omega at +Delta, omega at -Delta).

Quantized DE tracks one pmf per protograph edge on a uniform 255-bin LLR
grid over [-25, 25]; variable-node updates are saturating convolutions and
check-node updates fold a precomputed two-input boxplus table over the bin
centers. PEXIT tracks one mutual-information scalar per edge under a
Gaussian-message assumption with the usual J function. Either analysis
declares convergence when every variable-node type's a-posteriori statistic
is past tolerance (error mass < 1e-9, or MI > 1 - 1e-6).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, cached_property

import numpy as np
from numba import njit
from scipy.special import ndtr

from .channels import (
    ChannelParams,
    apriori_llr,
    capacity_biawgn,
    capacity_bsc,
    shannon_limit_inverse,
)
from .matcher import omega_for_rate
from .protograph import BaseMatrix, Protograph


class NoConvergenceInBracketError(RuntimeError):
    """Threshold bracket could not be established even after expansion."""


# ---------------------------------------------------------------------------
# quantization grid
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuantGrid:
    """Uniform LLR quantizer: odd bin count, zero-centered middle bin."""

    bins: int = 255
    lo: float = -25.0
    hi: float = 25.0

    def __post_init__(self):
        if self.bins < 3 or self.bins % 2 == 0:
            raise ValueError("bins must be odd and >= 3")
        if self.lo >= self.hi:
            raise ValueError("empty range")

    @property
    def delta(self) -> float:
        return (self.hi - self.lo) / self.bins

    @property
    def mid(self) -> int:
        return self.bins // 2

    @cached_property
    def centers(self) -> np.ndarray:
        return self.lo + (np.arange(self.bins) + 0.5) * self.delta

    def gaussian_pmf(self, mean: float, var: float) -> np.ndarray:
        """Quantize N(mean, var) onto the grid; tails lump into the end bins."""
        edges = self.lo + self.delta * np.arange(self.bins + 1)
        cdf = ndtr((edges - mean) / math.sqrt(var))
        pmf = np.diff(cdf)
        pmf[0] += cdf[0]
        pmf[-1] += 1.0 - cdf[-1]
        return pmf

    def point_mass(self, x: float, mass: float, out: np.ndarray) -> None:
        """Add a point mass, split over the two bracketing centers (mean-preserving)."""
        u = (x - self.lo) / self.delta - 0.5
        i0 = math.floor(u)
        frac = u - i0
        i0 = min(max(i0, 0), self.bins - 1)
        i1 = min(max(i0 + 1, 0), self.bins - 1)
        out[i0] += mass * (1.0 - frac)
        out[i1] += mass * frac

    def twopoint_pmf(self, delta_llr: float, omega: float) -> np.ndarray:
        """Sparse-word prior: mass 1-omega at +delta_llr, omega at -delta_llr."""
        pmf = np.zeros(self.bins)
        self.point_mass(+delta_llr, 1.0 - omega, pmf)
        self.point_mass(-delta_llr, omega, pmf)
        return pmf

    def error_mass(self, pmf: np.ndarray) -> float:
        """Mass on the negative half plus half the zero bin."""
        return float(pmf[: self.mid].sum() + 0.5 * pmf[self.mid])


DEFAULT_GRID = QuantGrid()


@lru_cache(maxsize=4)
def _boxplus_table(grid: QuantGrid) -> np.ndarray:
    """bins x bins table of quantized boxplus(center_i, center_j) bin indices."""
    c = grid.centers
    t = np.tanh(0.5 * c)
    prod = np.outer(t, t)
    np.clip(prod, -1.0 + 1e-16, 1.0 - 1e-16, out=prod)
    val = 2.0 * np.arctanh(prod)
    idx = np.floor((val - grid.lo) / grid.delta).astype(np.int64)
    np.clip(idx, 0, grid.bins - 1, out=idx)
    return idx.astype(np.int16)


@njit(cache=True)
def _conv_fold(p, q, mid, out):
    """Saturating quantized convolution: out(m) = sum_{i+j-mid=m} p(i) q(j)."""
    n = p.shape[0]
    out[:] = 0.0
    for i in range(n):
        pi = p[i]
        if pi == 0.0:
            continue
        base = i - mid
        for j in range(n):
            qj = q[j]
            if qj == 0.0:
                continue
            m = base + j
            if m < 0:
                m = 0
            elif m >= n:
                m = n - 1
            out[m] += pi * qj
    return out


@njit(cache=True)
def _table_fold(p, q, table, out):
    """Quantized boxplus of two pmfs through the precomputed index table."""
    n = p.shape[0]
    out[:] = 0.0
    for i in range(n):
        pi = p[i]
        if pi == 0.0:
            continue
        for j in range(n):
            qj = q[j]
            if qj != 0.0:
                out[table[i, j]] += pi * qj
    return out


def _as_proto(p) -> Protograph:
    if isinstance(p, BaseMatrix):
        return p.protograph()
    if isinstance(p, Protograph):
        return p
    raise TypeError("expected BaseMatrix or Protograph")


_STALL_WINDOW = 200
_STALL_RELTOL = 1e-6


DE_TARGET_MASS = 1e-10


def de_quantized_converges(p, omega: float, es_n0_db: float,
                           grid: QuantGrid = DEFAULT_GRID,
                           max_iter: int = 2000,
                           tol: float = DE_TARGET_MASS) -> bool:
    """Quantized density evolution convergence test at one operating point.

    Flooding schedule over protograph edge types: variable-node update =
    saturating convolution of the node prior with the incoming pmfs (in edge
    order), check-node update = left fold of the boxplus table over the other
    edges. Converged when every variable-node type's a-posteriori error mass
    drops below tol; a run whose worst error mass stops improving (relative
    progress < 1e-6 over 200 iterations) is declared stuck early.
    """
    proto = _as_proto(p)
    sigma = ChannelParams(es_n0_db).sigma
    bins = grid.bins
    mid = grid.mid
    table = _boxplus_table(grid)

    priors = []
    for j in range(proto.h0 + proto.n0):
        if j < proto.h0:
            priors.append(grid.twopoint_pmf(apriori_llr(omega), omega))
        else:
            priors.append(grid.gaussian_pmf(2.0 / sigma**2, 4.0 / sigma**2))

    n_edges = proto.n_edges
    c2v = np.zeros((n_edges, bins))
    c2v[:, mid] = 1.0  # zero-LLR spikes: first VN update sends the bare priors
    v2c = np.zeros((n_edges, bins))
    scratch = np.empty(bins)
    app = np.empty(bins)

    history = []
    for it in range(1, max_iter + 1):
        for j in range(proto.h0 + proto.n0):
            edges = proto.edges_at_vn[j]
            for e in edges:
                acc = priors[j]
                for e2 in edges:
                    if e2 == e:
                        continue
                    acc = _conv_fold(acc, c2v[e2], mid, scratch).copy()
                v2c[e] = acc
                s = v2c[e].sum()
                if s > 0:
                    v2c[e] /= s
        for i in range(proto.n0):
            edges = proto.edges_at_cn[i]
            for e in edges:
                acc = None
                for e2 in edges:
                    if e2 == e:
                        continue
                    if acc is None:
                        acc = v2c[e2].copy()
                    else:
                        acc = _table_fold(acc, v2c[e2], table, scratch).copy()
                if acc is None:
                    # degree-1 check pins its variable to 0: certainty mass
                    acc = np.zeros(bins)
                    acc[-1] = 1.0
                c2v[e] = acc
                s = c2v[e].sum()
                if s > 0:
                    c2v[e] /= s
        worst = 0.0
        for j in range(proto.h0 + proto.n0):
            acc = priors[j]
            for e in proto.edges_at_vn[j]:
                acc = _conv_fold(acc, c2v[e], mid, app).copy()
            err = grid.error_mass(acc)
            if err > worst:
                worst = err
        if worst < tol:
            return True
        history.append(worst)
        if it > 2 * _STALL_WINDOW:
            prev = history[-1 - 2 * _STALL_WINDOW]
            if worst > prev * (1.0 - _STALL_RELTOL):
                return False
    return False


# ---------------------------------------------------------------------------
# PEXIT
# ---------------------------------------------------------------------------

_J_SIGMA_MAX = 40.0
_gh_x, _gh_w = np.polynomial.hermite.hermgauss(64)


def _j_exact(sig: np.ndarray) -> np.ndarray:
    """J(sigma) = MI of a consistent Gaussian LLR N(sigma^2/2, sigma^2)."""
    sig = np.atleast_1d(np.asarray(sig, dtype=np.float64))
    z = math.sqrt(2.0) * _gh_x
    L = 0.5 * sig[:, None] ** 2 + sig[:, None] * z[None, :]
    vals = np.logaddexp(0.0, -L) / math.log(2.0)
    return 1.0 - (vals @ _gh_w) / math.sqrt(math.pi)


@lru_cache(maxsize=1)
def _j_table():
    sig = np.linspace(0.0, _J_SIGMA_MAX, 16001)
    tab = _j_exact(sig)
    tab[0] = 0.0
    # keep strictly increasing for the inverse interpolation
    keep = np.concatenate([[True], np.diff(tab) > 0])
    return sig[keep], np.minimum(tab[keep], 1.0)


def j_fun(sig):
    """Mutual information of a consistent Gaussian LLR with std-dev sigma."""
    s, t = _j_table()
    return np.interp(sig, s, t)


def j_inv(mi):
    """Inverse of j_fun, clamped to the tabulated range."""
    s, t = _j_table()
    return np.interp(mi, t, s)


def pexit_converges(p, omega: float, es_n0_db: float,
                    max_iter: int = 2000, tol: float = 1e-6) -> bool:
    """Protograph EXIT convergence test at one operating point.

    One MI scalar per protograph edge and direction, Gaussian-message model
    throughout (the two-point sparse prior enters only through its capacity,
    mapped to an equivalent Gaussian via J^-1). Converged when every
    variable-node type's a-posteriori MI exceeds 1 - tol.
    """
    proto = _as_proto(p)
    nt = proto.h0 + proto.n0
    i_ch = np.empty(nt)
    for j in range(nt):
        if j < proto.h0:
            i_ch[j] = capacity_bsc(omega)
        else:
            i_ch[j] = capacity_biawgn(es_n0_db)
    sig_ch2 = j_inv(i_ch) ** 2

    if np.all(j_fun(np.sqrt(sig_ch2)) > 1.0 - tol):
        return True

    n_edges = proto.n_edges
    sig2_c2v = np.zeros(n_edges)   # squared sigma of CN->VN messages
    i_app = np.zeros(nt)
    last = np.zeros(nt)
    stall = 0
    for _ in range(max_iter):
        # VN update
        sig2_v2c = np.empty(n_edges)
        for j in range(nt):
            edges = proto.edges_at_vn[j]
            total = sig_ch2[j] + sum(sig2_c2v[e] for e in edges)
            for e in edges:
                sig2_v2c[e] = total - sig2_c2v[e]
        i_v2c = j_fun(np.sqrt(sig2_v2c))
        # CN update (dual relation)
        sig2_rev = j_inv(1.0 - i_v2c) ** 2
        for i in range(proto.n0):
            edges = proto.edges_at_cn[i]
            total = sum(sig2_rev[e] for e in edges)
            for e in edges:
                i_ec = 1.0 - float(j_fun(math.sqrt(max(total - sig2_rev[e], 0.0))))
                sig2_c2v[e] = float(j_inv(i_ec)) ** 2
        # APP check
        for j in range(nt):
            tot = sig_ch2[j] + sum(sig2_c2v[e] for e in proto.edges_at_vn[j])
            i_app[j] = float(j_fun(math.sqrt(tot)))
        if np.all(i_app > 1.0 - tol):
            return True
        if np.all(i_app - last < 1e-12):
            stall += 1
            if stall >= 10:
                return False
        else:
            stall = 0
        last = i_app.copy()
    return False


# ---------------------------------------------------------------------------
# threshold search
# ---------------------------------------------------------------------------

_BRACKET_LO = -15.0
_BRACKET_HI = 10.0
_EXPAND_LO = -30.0
_EXPAND_HI = 30.0


def threshold_search(p, omega: float, method: str = "quantized_de",
                     grid: QuantGrid = DEFAULT_GRID, max_iter: int = 2000,
                     resolution_db: float = 0.01,
                     bracket: tuple = (_BRACKET_LO, _BRACKET_HI)) -> float:
    """Minimum Es/N0 (dB) at which the chosen analysis converges.

    Deterministic bisection on an integer grid of resolution_db steps; the
    initial bracket expands in 5 dB moves up to [-30, +30] dB before raising
    NoConvergenceInBracketError.
    """
    proto = _as_proto(p)
    if method in ("quantized_de", "de"):
        def conv(db):
            return de_quantized_converges(proto, omega, db, grid=grid,
                                          max_iter=max_iter)
    elif method == "pexit":
        def conv(db):
            return pexit_converges(proto, omega, db, max_iter=max_iter)
    else:
        raise ValueError(f"unknown method {method!r}")

    step = resolution_db
    lo = int(round(bracket[0] / step))
    hi = int(round(bracket[1] / step))
    while not conv(hi * step):
        if hi * step >= _EXPAND_HI:
            raise NoConvergenceInBracketError(
                f"no convergence up to {hi * step} dB (method={method})")
        hi += int(round(5.0 / step))
        hi = min(hi, int(round(_EXPAND_HI / step)))
    while conv(lo * step):
        if lo * step <= _EXPAND_LO:
            raise NoConvergenceInBracketError(
                f"converges even at {lo * step} dB; no lower bracket")
        lo -= int(round(5.0 / step))
        lo = max(lo, int(round(_EXPAND_LO / step)))
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if conv(mid * step):
            hi = mid
        else:
            lo = mid
    return hi * step


@dataclass(frozen=True)
class ThresholdPoint:
    rate: float
    omega: float
    gamma_star_db: float
    shannon_db: float
    gap_db: float


def threshold_for_rate(base: BaseMatrix, rate: float, method: str = "quantized_de",
                       grid: QuantGrid = DEFAULT_GRID,
                       max_iter: int = 2000) -> ThresholdPoint:
    """Threshold of a base matrix at a total rate R = H_b(omega) * R_inner."""
    omega = omega_for_rate(rate, base.rate_inner)
    gamma = threshold_search(base.protograph(), omega, method=method, grid=grid,
                             max_iter=max_iter)
    sh = shannon_limit_inverse(rate)
    return ThresholdPoint(rate=rate, omega=omega, gamma_star_db=gamma,
                          shannon_db=sh, gap_db=gamma - sh)


def threshold_table(base: BaseMatrix, rates, method: str = "quantized_de",
                    grid: QuantGrid = DEFAULT_GRID,
                    max_iter: int = 2000) -> list:
    return [threshold_for_rate(base, r, method=method, grid=grid,
                               max_iter=max_iter) for r in rates]


def write_threshold_csv(points, path) -> None:
    """CSV rows (rate, omega, gamma_star_db, shannon_db, gap_db), deterministic."""
    lines = ["rate,omega,gamma_star_db,shannon_db,gap_db"]
    for pt in points:
        lines.append(
            f"{pt.rate:.6g},{pt.omega:.8g},{pt.gamma_star_db:.2f},"
            f"{pt.shannon_db:.4f},{pt.gap_db:.4f}"
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
