"""Ensemble-average input-output weight enumerators and their growth rate.

Finite length: the average number of inner-code codewords with punctured
(input) weight a and transmitted (output) weight b over the uniform-
permutation lift ensemble is

    A(a,b) = sum_eps  prod_i coeff(S_i^ell, z^kappa_i(eps))
                      / prod_j C(ell, eps_j)^(d_vj - 1)

where eps assigns a weight 0..ell to each variable-node type (summing to a
over punctured types and b over transmitted types), kappa copies eps onto
edges, and S_i(z) = [prod_g (1+z_g) + prod_g (1-z_g)] / 2 generates the
even-weight configurations of check-node type i. Everything is exact:
big-integer dynamic programming for the coefficients, rational arithmetic
for the sum.

Asymptotics: G(alpha, beta) = lim (1/n) ln A(alpha n, beta n) follows from
the saddle-point (Hayman) evaluation of the same sum; it requires solving a
square nonlinear system in the saddle variables z_g, the per-type normalized
weights theta_j, and two multipliers. Parallel edges share one z by
symmetry, which shrinks the system before the Newton solve. The sign of G
near the origin classifies an ensemble: positive means exponentially many
low-weight codewords (bad), negative means their average count vanishes
(good).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import linprog

from .protograph import BaseMatrix, Protograph


class ComplexityCapError(RuntimeError):
    """Enumeration exceeded max_terms; .partial holds the accumulated value."""

    def __init__(self, msg, partial=None, terms=0):
        super().__init__(msg)
        self.partial = partial
        self.terms = terms


class SolverDivergedError(RuntimeError):
    """Saddle-point system unsolved; .best_residual holds the closest attempt."""

    def __init__(self, msg, best_residual=float("inf")):
        super().__init__(msg)
        self.best_residual = best_residual


def _as_proto(p) -> Protograph:
    if isinstance(p, BaseMatrix):
        return p.protograph()
    if isinstance(p, Protograph):
        return p
    raise TypeError("expected BaseMatrix or Protograph")


# ---------------------------------------------------------------------------
# exact finite-length enumerator
# ---------------------------------------------------------------------------

def cn_generating_coeff(ell: int, kappa) -> int:
    """Exact coefficient of z^kappa in S(z)^ell for one check-node type.

    Counts the ways to place kappa_g flagged sockets of each incident edge g
    across the ell check copies (each copy has one socket per edge) so that
    every copy sees even parity. Dynamic programming over edges with the
    number of odd-parity copies as state; exact big integers.
    """
    kappa = tuple(int(x) for x in kappa)
    if any(x < 0 or x > ell for x in kappa):
        raise ValueError(f"kappa entries must lie in [0, {ell}]")
    return _cn_coeff_cached(ell, tuple(sorted(kappa)))


@lru_cache(maxsize=200000)
def _cn_coeff_cached(ell: int, kappa: tuple) -> int:
    ways = [0] * (ell + 1)
    ways[0] = 1
    for kg in kappa:
        if kg == 0:
            continue
        new = [0] * (ell + 1)
        for o, w in enumerate(ways):
            if w == 0:
                continue
            tmin = max(0, kg - (ell - o))
            tmax = min(o, kg)
            for t in range(tmin, tmax + 1):
                new[o + kg - 2 * t] += w * math.comb(o, t) * math.comb(ell - o, kg - t)
        ways = new
    return ways[0]


def _eps_terms(proto: Protograph, ell: int, a_cap: int, b_cap: int,
               exact: tuple | None, max_terms: int):
    """Yield (eps, a, b) over the admissible weight assignments.

    exact=(a,b) restricts to exact sums; otherwise all sums up to the caps
    are produced. Raises ComplexityCapError past max_terms.
    """
    h0, n0 = proto.h0, proto.n0
    nt = h0 + n0
    limits = [min(ell, a_cap if j < h0 else b_cap) for j in range(nt)]
    eps = [0] * nt
    count = 0

    def rec(j, rem_a, rem_b):
        nonlocal count
        if j == nt:
            a = sum(eps[:h0])
            b = sum(eps[h0:])
            if exact is not None and (a, b) != exact:
                return
            count += 1
            if count > max_terms:
                raise ComplexityCapError(
                    f"enumeration exceeded {max_terms} terms", terms=count)
            yield tuple(eps), a, b
            return
        rem = rem_a if j < h0 else rem_b
        hi = min(limits[j], rem)
        lo = 0
        if exact is not None:
            # prune: remaining types on this side must be able to absorb the rest
            later = sum(limits[jj] for jj in range(j + 1, (h0 if j < h0 else nt)))
            lo = max(0, rem - later)
        for v in range(lo, hi + 1):
            eps[j] = v
            if j < h0:
                yield from rec(j + 1, rem_a - v, rem_b)
            else:
                yield from rec(j + 1, rem_a, rem_b - v)
            eps[j] = 0

    yield from rec(0, a_cap, b_cap)


def _term_value(proto: Protograph, ell: int, eps: tuple) -> Fraction:
    num = 1
    for i in range(proto.n0):
        kappa = tuple(eps[proto.edge_vn[g]] for g in proto.edges_at_cn[i])
        c = cn_generating_coeff(ell, kappa)
        if c == 0:
            return Fraction(0)
        num *= c
    den = 1
    for j, ej in enumerate(eps):
        d = proto.vn_degree(j)
        if d > 1:
            den *= math.comb(ell, ej) ** (d - 1)
    return Fraction(num, den)


def avg_io_weight_enum(p, ell: int, a: int, b: int,
                       max_terms: int = 2_000_000) -> Fraction:
    """Exact ensemble-average codeword count at input weight a, output weight b."""
    proto = _as_proto(p)
    h = proto.h0 * ell
    n = proto.n0 * ell
    if not (0 <= a <= h and 0 <= b <= n):
        raise ValueError(f"(a={a}, b={b}) outside [0,{h}] x [0,{n}]")
    total = Fraction(0)
    for eps, _, _ in _eps_terms(proto, ell, a, b, (a, b), max_terms):
        total += _term_value(proto, ell, eps)
    return total


def avg_io_weight_table(p, ell: int, a_max: int, b_max: int,
                        max_terms: int = 2_000_000) -> dict:
    """All exact averages with a <= a_max, b <= b_max in one enumeration pass."""
    proto = _as_proto(p)
    a_max = min(a_max, proto.h0 * ell)
    b_max = min(b_max, proto.n0 * ell)
    table: dict = {}
    try:
        for eps, a, b in _eps_terms(proto, ell, a_max, b_max, None, max_terms):
            v = _term_value(proto, ell, eps)
            if v:
                table[(a, b)] = table.get((a, b), Fraction(0)) + v
    except ComplexityCapError as exc:
        exc.partial = table
        raise
    return table


# ---------------------------------------------------------------------------
# asymptotic growth rate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthSolution:
    alpha: float
    beta: float
    z: tuple           # per-edge saddle values, protograph edge order
    theta: tuple       # per-VN-type normalized weights
    mu1: float
    mu2: float
    G: float
    residual: float


def _sigmoid(t):
    return 0.5 * (1.0 + np.tanh(0.5 * t))


def _natural_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log(p) + (1.0 - p) * math.log(1.0 - p))


class _SaddleSystem:
    """Saddle-point equations in reduced variables.

    Unknowns x = [u (log z, one per group), t (logit of n0*theta per VN
    type), mu1, mu2]. Groups are (cn type, vn type) pairs when reduce=True
    (parallel edges share a z) or individual edges otherwise.
    """

    def __init__(self, proto: Protograph, alpha: float, beta: float,
                 reduce: bool = True):
        self.proto = proto
        self.alpha = alpha
        self.beta = beta
        self.nt = proto.h0 + proto.n0
        if reduce:
            seen = {}
            groups = []
            self.edge_group = []
            for g in range(proto.n_edges):
                key = (proto.edge_cn[g], proto.edge_vn[g])
                if key not in seen:
                    seen[key] = len(groups)
                    groups.append([key[0], key[1], 0])
                groups[seen[key]][2] += 1
                self.edge_group.append(seen[key])
        else:
            groups = [[proto.edge_cn[g], proto.edge_vn[g], 1]
                      for g in range(proto.n_edges)]
            self.edge_group = list(range(proto.n_edges))
        self.groups = [tuple(g) for g in groups]
        self.ng = len(self.groups)
        self.nvars = self.ng + self.nt + 2
        self.groups_at_cn = [[] for _ in range(proto.n0)]
        self.groups_at_vn = [[] for _ in range(self.nt)]
        for idx, (i, j, m) in enumerate(self.groups):
            self.groups_at_cn[i].append(idx)
            self.groups_at_vn[j].append(idx)

    def residual(self, x: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return self._residual(x)

    def _residual(self, x: np.ndarray) -> np.ndarray:
        proto = self.proto
        u = x[: self.ng]
        t = x[self.ng : self.ng + self.nt]
        mu1, mu2 = x[-2], x[-1]
        z = np.exp(u)
        s = _sigmoid(t)  # n0 * theta_j
        r = np.empty(self.nvars)
        # per-group: z dS/dz_g / S  =  sigmoid(t_j), one representative edge
        for i in range(proto.n0):
            gids = self.groups_at_cn[i]
            zp = [(z[gi], self.groups[gi][2]) for gi in gids]
            p_plus = 1.0
            p_minus = 1.0
            for zg, m in zp:
                p_plus *= (1.0 + zg) ** m
                p_minus *= (1.0 - zg) ** m
            s_i = 0.5 * (p_plus + p_minus)
            for gi in gids:
                zg, m = z[gi], self.groups[gi][2]
                excl_p = p_plus / (1.0 + zg)
                excl_m = 1.0
                for gi2 in gids:
                    z2, m2 = z[gi2], self.groups[gi2][2]
                    excl_m *= (1.0 - z2) ** (m2 - 1 if gi2 == gi else m2)
                r[gi] = zg * (excl_p - excl_m) / (2.0 * s_i) - s[self.groups[gi][1]]
        # per-VN-type balance
        for j in range(self.nt):
            acc = 0.0
            for gi in self.groups_at_vn[j]:
                acc += self.groups[gi][2] * u[gi]
            mu = mu1 if j < proto.h0 else mu2
            r[self.ng + j] = (proto.vn_degree(j) - 1) * t[j] - acc - mu
        # weight constraints
        r[-2] = s[: proto.h0].sum() / proto.n0 - self.alpha
        r[-1] = s[proto.h0 :].sum() / proto.n0 - self.beta
        return r

    def initial_guess(self, rng: np.random.Generator | None = None,
                      concentrate: tuple | None = None) -> np.ndarray:
        """Start vector; `concentrate=(jp, jt)` loads most weight on one
        punctured and one transmitted type to reach boundary-hugging roots."""
        proto = self.proto
        x = np.empty(self.nvars)
        th = np.empty(self.nt)
        th[: proto.h0] = self.alpha / proto.h0
        th[proto.h0 :] = self.beta / proto.n0
        if concentrate is not None:
            jp, jt = concentrate
            spread_p = 0.02 * self.alpha / proto.h0
            spread_t = 0.02 * self.beta / proto.n0
            th[: proto.h0] = spread_p
            th[jp] = self.alpha - spread_p * (proto.h0 - 1)
            th[proto.h0 :] = spread_t
            th[jt] = self.beta - spread_t * (proto.n0 - 1)
        c = np.clip(proto.n0 * th, 1e-12, 1.0 - 1e-12)
        x[self.ng : self.ng + self.nt] = np.log(c / (1.0 - c))
        for gi, (i, j, m) in enumerate(self.groups):
            deg = max(proto.cn_degree(i) - 1, 1)
            x[gi] = 0.5 * math.log(max(c[j], 1e-300) / deg)
        # multipliers consistent with the initial t, u
        for which, mu_idx in ((0, self.nvars - 2), (1, self.nvars - 1)):
            vals = []
            for j in range(self.nt):
                if (j < proto.h0) != (which == 0):
                    continue
                acc = sum(self.groups[gi][2] * x[gi] for gi in self.groups_at_vn[j])
                vals.append((proto.vn_degree(j) - 1) * x[self.ng + j] - acc)
            x[mu_idx] = float(np.mean(vals)) if vals else 0.0
        if rng is not None:
            x = x + rng.normal(0.0, 0.5, size=self.nvars)
        return x

    def solve(self, x0: np.ndarray, max_newton: int = 60, tol: float = 1e-10):
        x = x0.copy()
        f = self.residual(x)
        if not np.all(np.isfinite(f)):
            return x, float("inf")
        best = float(np.max(np.abs(f)))
        for _ in range(max_newton):
            norm = np.max(np.abs(f))
            if norm < tol:
                return x, norm
            jac = np.empty((self.nvars, self.nvars))
            with np.errstate(all="ignore"):
                for k in range(self.nvars):
                    hk = 1e-7 * max(1.0, abs(x[k]))
                    xp = x.copy(); xp[k] += hk
                    xm = x.copy(); xm[k] -= hk
                    jac[:, k] = (self.residual(xp) - self.residual(xm)) / (2.0 * hk)
            if not np.all(np.isfinite(jac)):
                return x, norm
            # min-norm step: tolerates gauge directions (degree-2 CNs,
            # near-facet saddles) where the Jacobian loses rank
            try:
                dx = np.linalg.lstsq(jac, -f, rcond=None)[0]
            except np.linalg.LinAlgError:
                return x, norm
            if not np.all(np.isfinite(dx)):
                return x, norm
            lam = 1.0
            base = np.linalg.norm(f)
            while lam > 1e-6:
                xn = x + lam * dx
                fn = self.residual(xn)
                if np.all(np.isfinite(fn)) and np.linalg.norm(fn) < base:
                    x, f = xn, fn
                    break
                lam *= 0.5
            else:
                return x, float(np.max(np.abs(f)))
            best = min(best, float(np.max(np.abs(f))))
        return x, float(np.max(np.abs(f)))

    def trustworthy(self, x: np.ndarray) -> bool:
        """Reject numerically fake roots.

        A root with some z escaping to infinity makes S_i = (p+ + p-)/2 a
        difference of huge near-cancelling products; the residual can then
        "converge" on rounding noise while ln S_i is garbage. Legitimate
        interior saddles keep every z moderate and every S_i well away from
        the cancellation floor.
        """
        z = np.exp(x[: self.ng])
        if not np.all(np.isfinite(z)) or z.max() > 1e8:
            return False
        for i in range(self.proto.n0):
            p_plus = 1.0
            p_minus = 1.0
            for gi in self.groups_at_cn[i]:
                zg, m = z[gi], self.groups[gi][2]
                p_plus *= (1.0 + zg) ** m
                p_minus *= (1.0 - zg) ** m
            s_i = 0.5 * (p_plus + p_minus)
            if not np.isfinite(s_i) or s_i <= 0.0:
                return False
            if s_i < 1e-9 * (abs(p_plus) + abs(p_minus)):
                return False
        return True

    def growth(self, x: np.ndarray) -> GrowthSolution:
        proto = self.proto
        u = x[: self.ng]
        t = x[self.ng : self.ng + self.nt]
        z = np.exp(u)
        s = _sigmoid(t)
        theta = s / proto.n0
        total = 0.0
        for i in range(proto.n0):
            p_plus = 1.0
            p_minus = 1.0
            for gi in self.groups_at_cn[i]:
                zg, m = z[gi], self.groups[gi][2]
                p_plus *= (1.0 + zg) ** m
                p_minus *= (1.0 - zg) ** m
            total += math.log(0.5 * (p_plus + p_minus))
        g_val = total / proto.n0
        for j in range(self.nt):
            lnz_sum = sum(self.groups[gi][2] * u[gi] for gi in self.groups_at_vn[j])
            g_val -= (proto.vn_degree(j) - 1) / proto.n0 * _natural_entropy(float(s[j]))
            g_val -= theta[j] * lnz_sum
        z_edges = tuple(float(z[self.edge_group[g]]) for g in range(proto.n_edges))
        res = float(np.max(np.abs(self.residual(x))))
        return GrowthSolution(alpha=self.alpha, beta=self.beta, z=z_edges,
                              theta=tuple(float(v) for v in theta),
                              mu1=float(x[-2]), mu2=float(x[-1]),
                              G=float(g_val), residual=res)


def weight_feasibility(p, alpha: float, beta: float) -> float:
    """Maximal interior slack of the weight pair within the enumerator support.

    A weight assignment theta over VN types (summing to alpha on punctured
    types and beta on transmitted ones) yields a nonzero enumerator only if,
    at every CN, no edge carries more weight than the rest combined (parity
    forces pairing) and every n0*theta_j stays inside (0, 1). This solves a
    small LP maximizing the minimal slack over those constraints.

    Returns
    -------
    float
        Best achievable slack: > 0 strictly interior, ~ 0 on a facet
        (enumerator nonzero but the saddle escapes to a boundary),
        < 0 infeasible (A(a,b) = 0 for all large lifts).
    """
    proto = _as_proto(p)
    nt = proto.h0 + proto.n0
    nv = nt + 1  # theta_j ..., t
    a_ub = []
    b_ub = []
    # facet constraints per (cn, vn) incidence: 2 s_j - sum_i m s_j' + t <= 0
    for i in range(proto.n0):
        row_tot = np.zeros(nv)
        present = set()
        for e in proto.edges_at_cn[i]:
            j = proto.edge_vn[e]
            row_tot[j] += proto.n0
            present.add(j)
        for j in present:
            row = -row_tot.copy()
            row[j] += 2 * proto.n0
            row[-1] = 1.0
            a_ub.append(row)
            b_ub.append(0.0)
    # interior bounds on s_j = n0 theta_j
    for j in range(nt):
        lo = np.zeros(nv)
        lo[j] = -proto.n0
        lo[-1] = 1.0
        a_ub.append(lo)
        b_ub.append(0.0)
        hi = np.zeros(nv)
        hi[j] = proto.n0
        hi[-1] = 1.0
        a_ub.append(hi)
        b_ub.append(1.0)
    a_eq = np.zeros((2, nv))
    a_eq[0, : proto.h0] = 1.0
    a_eq[1, proto.h0 : nt] = 1.0
    b_eq = [alpha, beta]
    c = np.zeros(nv)
    c[-1] = -1.0
    res = linprog(c, A_ub=np.array(a_ub), b_ub=np.array(b_ub),
                  A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0.0, 1.0 / proto.n0)] * nt + [(-1.0, 1.0)],
                  method="highs")
    if not res.success:
        return -1.0
    return float(-res.fun)


_FACET_SLACK = 1e-9


def _interior_growth(proto: Protograph, alpha: float, beta: float,
                     reduce: bool, restarts: int, tol: float, seed: int,
                     x0: np.ndarray | None) -> GrowthSolution:
    # The stationary system can have several roots: each is a critical weight
    # split theta with its (unique) z-saddle, and every one lower-bounds G.
    # Run all starts and keep the dominant root, not the first.
    sys_ = _SaddleSystem(proto, alpha, beta, reduce=reduce)
    best_res = float("inf")
    best_sol = None
    starts = []
    if x0 is not None:
        starts.append(np.asarray(x0, dtype=np.float64))
    starts.append(sys_.initial_guess())
    # pair-concentrated starts reach roots that hug the theta boundary
    for jp in range(proto.h0):
        for jt in range(proto.h0, proto.h0 + proto.n0):
            starts.append(sys_.initial_guess(concentrate=(jp, jt)))
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        starts.append(sys_.initial_guess(rng))
    for s0 in starts:
        if s0.shape != (sys_.nvars,):
            continue
        x, res = sys_.solve(s0, tol=tol)
        if res < tol and sys_.trustworthy(x):
            sol = sys_.growth(x)
            if best_sol is None or sol.G > best_sol.G:
                best_sol = sol
        best_res = min(best_res, res)
    if best_sol is not None:
        return best_sol
    raise SolverDivergedError(
        f"saddle solve failed at (alpha={alpha}, beta={beta})",
        best_residual=best_res)


def _facet_growth(proto: Protograph, alpha: float, beta: float,
                  reduce: bool, restarts: int, tol: float,
                  seed: int) -> GrowthSolution:
    """Boundary saddle: approach from the feasible side and extrapolate.

    On a support facet the saddle z runs to infinity, so no finite interior
    solve exists. G is continuous up to the facet; two solves at relative
    offsets delta and delta/10 along a feasible direction give a Richardson
    limit accurate to O(delta^2)."""
    delta = 1e-4

    def nudged(d):
        return [(alpha, beta * (1.0 + d)),
                (alpha * (1.0 - d), beta),
                (alpha * (1.0 - d), beta * (1.0 + d)),
                (alpha, beta * (1.0 - d)),
                (alpha * (1.0 + d), beta)]

    best_dir, best_slack = None, 0.0
    for k, (a1, b1) in enumerate(nudged(delta)):
        if not (0.0 < a1 < proto.h0 / proto.n0 and 0.0 < b1 < 1.0):
            continue
        sl = weight_feasibility(proto, a1, b1)
        if sl > best_slack:
            best_dir, best_slack = k, sl
    if best_dir is None:
        raise SolverDivergedError(
            f"no feasible direction off the support facet at "
            f"(alpha={alpha}, beta={beta})", best_residual=float("inf"))
    coarse = _interior_growth(proto, *nudged(delta)[best_dir], reduce,
                              restarts, tol, seed, None)
    a2, b2 = nudged(delta / 10.0)[best_dir]
    fine = _interior_growth(proto, a2, b2, reduce, restarts, tol, seed, None)
    g0 = (10.0 * fine.G - coarse.G) / 9.0
    return GrowthSolution(alpha=alpha, beta=beta, z=fine.z, theta=fine.theta,
                          mu1=fine.mu1, mu2=fine.mu2, G=g0,
                          residual=max(fine.residual, coarse.residual))


def growth_rate(p, alpha: float, beta: float, reduce: bool = True,
                restarts: int = 8, tol: float = 1e-10, seed: int = 0,
                x0: np.ndarray | None = None) -> GrowthSolution:
    """Solve the saddle-point system and evaluate G(alpha, beta).

    Damped Newton from a structured initial guess plus `restarts` randomized
    restarts (seeded, deterministic). For fixed weight split theta the
    z-saddle is unique, but several critical theta can coexist; each is a
    lower bound on G, so the largest converged root is returned. Weight
    pairs on a facet of the enumerator support (where the saddle diverges)
    are evaluated as one-sided limits; infeasible pairs, whose enumerator
    is identically zero, raise SolverDivergedError.
    """
    proto = _as_proto(p)
    if not 0.0 < alpha < proto.h0 / proto.n0:
        raise ValueError(f"alpha must lie in (0, {proto.h0}/{proto.n0})")
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    slack = weight_feasibility(proto, alpha, beta)
    if slack < -_FACET_SLACK:
        raise SolverDivergedError(
            f"(alpha={alpha}, beta={beta}) lies outside the enumerator "
            f"support (slack {slack:.2e}); A(a,b) is zero there",
            best_residual=float("inf"))
    if slack <= _FACET_SLACK:
        return _facet_growth(proto, alpha, beta, reduce, restarts, tol, seed)
    try:
        return _interior_growth(proto, alpha, beta, reduce, restarts, tol,
                                seed, x0)
    except SolverDivergedError:
        # saddle may still hug a facet despite interior weights
        return _facet_growth(proto, alpha, beta, reduce, restarts, tol, seed)


def _pack_warm(sol: GrowthSolution, sys_: _SaddleSystem) -> np.ndarray:
    x = np.empty(sys_.nvars)
    for gi in range(sys_.ng):
        # representative edge of the group
        for g, grp in enumerate(sys_.edge_group):
            if grp == gi:
                x[gi] = math.log(max(sol.z[g], 1e-300))
                break
    th = np.clip(np.array(sol.theta) * sys_.proto.n0, 1e-15, 1 - 1e-15)
    x[sys_.ng : sys_.ng + sys_.nt] = np.log(th / (1.0 - th))
    x[-2], x[-1] = sol.mu1, sol.mu2
    return x


def classify_ensemble(p, xi: float = 0.02, step: float = 1e-3,
                      tol: float = 1e-9) -> str:
    """Ensemble label from the sign of G near the origin.

    Scans nested squares (0, xi/8]^2, (0, xi/4]^2, ..., (0, xi]^2, smallest
    first. 'good' means some square has every feasible point strictly
    negative (low-weight codeword counts vanish below that scale); 'bad'
    means a clearly positive point shows up at the smallest square that
    yields a decision. Weight pairs outside the enumerator support are
    skipped (zero codewords there); a square with too many solver failures
    or with values inside the numerical noise band defers to the next
    larger one. 'undetermined' when no square decides.
    """
    proto = _as_proto(p)
    if not 0 < step < xi:
        raise ValueError("need 0 < step < xi")
    npts = int(np.clip(round(xi / step / 2.5), 4, 10))
    band = max(tol, 1e-8)  # facet extrapolation noise floor
    alpha_lim = proto.h0 / proto.n0
    for lv in (xi / 8, xi / 4, xi / 2, xi):
        vals = np.unique(np.maximum(np.linspace(lv / npts, lv, npts), 1e-4))
        pos = neg = near = fails = 0
        warm = None
        row_start = None
        for beta in vals:
            warm = row_start
            row_start = None
            for ai, alpha in enumerate(vals):
                if alpha >= alpha_lim:
                    continue
                if weight_feasibility(proto, float(alpha), float(beta)) < -_FACET_SLACK:
                    continue
                try:
                    sys_ = _SaddleSystem(proto, float(alpha), float(beta))
                    x0 = _pack_warm(warm, sys_) if warm is not None else None
                    sol = growth_rate(proto, float(alpha), float(beta), x0=x0)
                except SolverDivergedError:
                    fails += 1
                    continue
                warm = sol
                if ai == 0:
                    row_start = sol
                if sol.G > band:
                    pos += 1
                elif sol.G < -band:
                    neg += 1
                else:
                    near += 1
        solved = pos + neg + near
        if solved == 0:
            continue
        if fails > 0.1 * (solved + fails):
            continue
        if pos > 0:
            return "bad"
        if near == 0 and neg > 0:
            return "good"
    return "undetermined"


def growth_grid(p, alpha_max: float, beta_max: float, step: float) -> list:
    """(alpha, beta, G) triples on a regular grid; failed solves give G=nan."""
    proto = _as_proto(p)
    rows = []
    warm = None
    row_start = None
    a_vals = np.arange(step, alpha_max + step / 2, step)
    b_vals = np.arange(step, beta_max + step / 2, step)
    lim = proto.h0 / proto.n0
    for beta in b_vals:
        warm = row_start
        row_start = None
        for alpha in a_vals:
            if alpha >= lim:
                rows.append((float(alpha), float(beta), float("nan")))
                continue
            try:
                sys_ = _SaddleSystem(proto, float(alpha), float(beta))
                x0 = _pack_warm(warm, sys_) if warm is not None else None
                sol = growth_rate(proto, float(alpha), float(beta), x0=x0)
                warm = sol
                if row_start is None:
                    row_start = sol
                rows.append((float(alpha), float(beta), sol.G))
            except SolverDivergedError:
                rows.append((float(alpha), float(beta), float("nan")))
    return rows
