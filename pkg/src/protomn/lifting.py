"""Lifting protographs to finite Tanner graphs.

Two lift families:

* circulant progressive-edge-growth (`lift_circulant_peg`): one ell x ell
  circulant per protograph edge; shifts are chosen greedily, edge by edge, to
  maximize the length of the shortest cycle closed by the new circulant
  (computed by BFS on the partially built lifted graph, which is exact under
  circulant symmetry). Parallel protograph edges get distinct shifts.
* uniform random permutations (`lift_uniform_random`): each protograph edge
  carries an independent uniform permutation. This is the ensemble that the
  average weight-enumerator analysis describes, so by default instances are
  only re-drawn (not otherwise conditioned) until the inner part is
  invertible.

Variable-node instance v = j*ell + p (type-major, punctured types first),
check-node instance c = i*ell + q. Edge instance (e, p) joins variable
(vn[e], p) to check (cn[e], perm[e][p]); circulants use perm[e][p] =
(p + shift[e]) mod ell.
"""

from __future__ import annotations

import json
from collections import deque
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from ._gf2 import gf2_invert_packed, gf2_rank_packed, pack_rows, unpack_row, xor_selected_rows
from .protograph import BaseMatrix, base_matrix_from_dict

_BFS_DEPTH_CAP = 13  # cycles longer than this count as "no cycle" during PEG


class LiftTooSmallError(ValueError):
    """Lift size cannot host the protograph's parallel edges."""


class SingularH2Error(RuntimeError):
    """No invertible inner part found within the retry budget."""


class LiftedCode:
    """A lifted MacKay-Neal inner code (Tanner multigraph + packed encoder)."""

    def __init__(self, base: BaseMatrix, ell: int, method: str, seed,
                 shifts=None, perms=None):
        if ell < 1:
            raise LiftTooSmallError("ell must be >= 1")
        self.base = base
        self.ell = int(ell)
        self.method = method
        self.seed = seed
        self.proto = base.protograph()
        if shifts is not None:
            self.shifts = np.asarray(shifts, dtype=np.int32)
            p = (np.arange(ell, dtype=np.int32)[None, :] + self.shifts[:, None]) % ell
            self.perms = p.astype(np.int32)
        else:
            self.shifts = None
            self.perms = np.asarray(perms, dtype=np.int32)
        if self.perms.shape != (self.proto.n_edges, ell):
            raise ValueError("perms shape mismatch")

    # --- sizes ---

    @property
    def h(self) -> int:
        """Punctured (outer) block length h0 * ell."""
        return self.base.h0 * self.ell

    @property
    def n(self) -> int:
        """Transmitted block length n0 * ell."""
        return self.base.n0 * self.ell

    @property
    def num_checks(self) -> int:
        return self.base.n0 * self.ell

    @property
    def num_vns(self) -> int:
        return self.h + self.n

    @property
    def num_edges(self) -> int:
        return self.proto.n_edges * self.ell

    # --- lifted edge lists / adjacency ---

    @cached_property
    def inst_vn(self) -> np.ndarray:
        """Edge instance -> variable-node instance (len num_edges)."""
        ell = self.ell
        evn = np.asarray(self.proto.edge_vn, dtype=np.int32)
        out = (evn[:, None] * ell + np.arange(ell, dtype=np.int32)[None, :])
        return out.reshape(-1).astype(np.int32)

    @cached_property
    def inst_cn(self) -> np.ndarray:
        """Edge instance -> check-node instance (len num_edges)."""
        ell = self.ell
        ecn = np.asarray(self.proto.edge_cn, dtype=np.int32)
        out = ecn[:, None] * ell + self.perms
        return out.reshape(-1).astype(np.int32)

    @staticmethod
    def _csr(groups: np.ndarray, n_groups: int):
        order = np.argsort(groups, kind="stable").astype(np.int32)
        counts = np.bincount(groups, minlength=n_groups)
        ptr = np.zeros(n_groups + 1, dtype=np.int32)
        np.cumsum(counts, out=ptr[1:])
        return ptr, order

    @cached_property
    def vn_adjacency(self):
        """(ptr, edge_ids): edge instances grouped by variable node."""
        return self._csr(self.inst_vn, self.num_vns)

    @cached_property
    def cn_adjacency(self):
        """(ptr, edge_ids): edge instances grouped by check node."""
        return self._csr(self.inst_cn, self.num_checks)

    # --- parity-check matrices (mod 2) ---

    @cached_property
    def H(self) -> sp.csr_matrix:
        m = sp.coo_matrix(
            (np.ones(self.num_edges, dtype=np.int64), (self.inst_cn, self.inst_vn)),
            shape=(self.num_checks, self.num_vns),
        ).tocsr()
        m.data &= 1
        m.eliminate_zeros()
        return m.astype(np.int8)

    @cached_property
    def H1(self) -> sp.csr_matrix:
        return self.H[:, : self.h].tocsr()

    @cached_property
    def H2(self) -> sp.csr_matrix:
        return self.H[:, self.h :].tocsr()

    @cached_property
    def _h2_inv_rows(self):
        """Packed rows of (H2^T)^-1; row j is column j of H2^-1. None if singular."""
        h2t = self.H2.T.toarray().astype(np.uint8)
        ok, inv = gf2_invert_packed(pack_rows(h2t))
        return inv if ok else None

    @property
    def h2_invertible(self) -> bool:
        return self._h2_inv_rows is not None

    # --- encoding ---

    def encode(self, v: np.ndarray) -> np.ndarray:
        """Inner-encode an outer word: c = H2^-1 H1 v over GF(2)."""
        inv = self._h2_inv_rows
        if inv is None:
            raise SingularH2Error("inner part is singular")
        v = np.asarray(v, dtype=np.int8)
        if v.shape != (self.h,):
            raise ValueError(f"outer word length {v.shape} != ({self.h},)")
        t = np.asarray(self.H1 @ v, dtype=np.int64) & 1
        return unpack_row(xor_selected_rows(inv, t.astype(np.uint8)), self.n)

    def codeword(self, v: np.ndarray) -> np.ndarray:
        """Full mother codeword [v | c]."""
        return np.concatenate([np.asarray(v, dtype=np.uint8), self.encode(v)])

    def syndrome(self, word: np.ndarray) -> np.ndarray:
        return np.asarray(self.H @ np.asarray(word, dtype=np.int8), dtype=np.int64) & 1

    def to_dict(self) -> dict:
        d = {
            "base": self.base.to_dict(),
            "ell": self.ell,
            "method": self.method,
            "seed": self.seed,
        }
        if self.shifts is not None:
            d["shifts"] = [int(s) for s in self.shifts]
        else:
            d["perms"] = [[int(x) for x in row] for row in self.perms]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "LiftedCode":
        base = base_matrix_from_dict(d["base"])
        return cls(
            base,
            int(d["ell"]),
            d.get("method", "unknown"),
            d.get("seed"),
            shifts=d.get("shifts"),
            perms=d.get("perms"),
        )


def _max_multiplicity(base: BaseMatrix) -> int:
    return max(max(row) for row in base.entries)


def h2_base_invertible_mod2(base: BaseMatrix) -> bool:
    """Whether the inner base block is invertible over GF(2) mod 2.

    If it is not, no lift whatsoever has an invertible inner part: summing
    the rows of any block row over its ell copies collapses each
    permutation to its multiplicity mod 2, so a mod-2 row dependence of the
    base lifts to a left null vector of every H2. Such ensembles are still
    perfectly valid analysis/search objects; they just have no encoder.
    """
    m = (np.array(base.entries, dtype=np.int64)[:, base.h0:] & 1).astype(np.uint8)
    return int(gf2_rank_packed(pack_rows(m))) == base.n0


def _bfs_dists(adj, start, cap):
    """Distances from start, truncated at cap; -1 means unreached."""
    dist = {start: 0}
    q = deque([start])
    while q:
        u = q.popleft()
        du = dist[u]
        if du >= cap:
            continue
        for w in adj[u]:
            if w not in dist:
                dist[w] = du + 1
                q.append(w)
    return dist


def _peg_shifts(proto, ell: int, rng: np.random.Generator) -> np.ndarray:
    """Greedy circulant shift selection maximizing the local girth."""
    nv = (proto.h0 + proto.n0) * ell
    adj = [[] for _ in range(nv + proto.n0 * ell)]  # vns then cns
    shifts = np.zeros(proto.n_edges, dtype=np.int32)
    used = {}
    # place variable-node types in order, yielding a deterministic edge order
    order = sorted(range(proto.n_edges),
                   key=lambda e: (proto.edge_vn[e], proto.edge_cn[e], e))
    for e in order:
        j, i = proto.edge_vn[e], proto.edge_cn[e]
        taken = used.setdefault((i, j), set())
        dist = _bfs_dists(adj, j * ell, _BFS_DEPTH_CAP)
        best_girth = -1
        cands = []
        for s in range(ell):
            if s in taken:
                continue
            d = dist.get(nv + i * ell + s)
            girth = (d + 1) if d is not None else 10**9
            if girth > best_girth:
                best_girth = girth
                cands = [s]
            elif girth == best_girth:
                cands.append(s)
        if not cands:
            raise LiftTooSmallError(
                f"ell={ell} cannot give distinct shifts to {len(taken) + 1} "
                f"parallel edges"
            )
        s = int(cands[rng.integers(len(cands))])
        shifts[e] = s
        taken.add(s)
        for p in range(ell):
            u = j * ell + p
            w = nv + i * ell + (p + s) % ell
            adj[u].append(w)
            adj[w].append(u)
    return shifts


def lift_circulant_peg(base: BaseMatrix, ell: int, seed: int = 0,
                       max_attempts: int = 25) -> LiftedCode:
    """Circulant-PEG lift, with an invertible inner part whenever possible.

    Girth-tied shift choices are broken by the seeded generator; attempts
    whose inner part comes out singular are re-drawn (fresh tie-breaking)
    up to max_attempts before giving up. Bases whose inner block is
    singular mod 2 can never produce an invertible lift; they return on
    the first draw with h2_invertible False (analysis/search only).
    """
    if ell < _max_multiplicity(base):
        raise LiftTooSmallError(
            f"ell={ell} below the largest edge multiplicity "
            f"{_max_multiplicity(base)}"
        )
    proto = base.protograph()
    attempts = max_attempts if h2_base_invertible_mod2(base) else 1
    code = None
    for attempt in range(attempts):
        rng = np.random.default_rng(np.random.SeedSequence([seed, attempt]))
        shifts = _peg_shifts(proto, ell, rng)
        code = LiftedCode(base, ell, "peg-circulant", seed, shifts=shifts)
        if code.h2_invertible:
            return code
    if attempts == 1:
        return code
    raise SingularH2Error(f"no invertible inner part in {max_attempts} attempts")


def lift_uniform_random(base: BaseMatrix, ell: int, seed: int = 0,
                        require_invertible: bool = True,
                        max_attempts: int = 25) -> LiftedCode:
    """Uniform-permutation lift (the ensemble behind average enumerators)."""
    if ell == 1 and _max_multiplicity(base) > 1:
        raise LiftTooSmallError("ell=1 cannot host parallel edges")
    proto = base.protograph()
    if not h2_base_invertible_mod2(base):
        require_invertible = False
    code = None
    for attempt in range(max_attempts if require_invertible else 1):
        rng = np.random.default_rng(np.random.SeedSequence([seed, attempt]))
        perms = np.stack([rng.permutation(ell) for _ in range(proto.n_edges)])
        code = LiftedCode(base, ell, "uniform", seed, perms=perms)
        if not require_invertible or code.h2_invertible:
            return code
    raise SingularH2Error(f"no invertible inner part in {max_attempts} attempts")


def girth(code: LiftedCode, cap: int = 16) -> int:
    """Exact girth of the lifted Tanner multigraph (parallel pair = 2), up to cap.

    BFS per edge instance; meant for moderate graph sizes.
    """
    nv = code.num_vns
    adj = [[] for _ in range(nv + code.num_checks)]
    for eid in range(code.num_edges):
        u = int(code.inst_vn[eid])
        w = nv + int(code.inst_cn[eid])
        adj[u].append((w, eid))
        adj[w].append((u, eid))
    best = cap + 1
    for eid in range(code.num_edges):
        src = int(code.inst_vn[eid])
        dst = nv + int(code.inst_cn[eid])
        # shortest path src -> dst avoiding this edge instance
        dist = {src: 0}
        q = deque([src])
        while q:
            u = q.popleft()
            du = dist[u]
            if du + 1 >= best or du >= cap:
                continue
            for w, e2 in adj[u]:
                if e2 == eid or w in dist:
                    continue
                dist[w] = du + 1
                if w == dst:
                    q.clear()
                    break
                q.append(w)
            else:
                continue
            break
        if dst in dist:
            best = min(best, dist[dst] + 1)
            if best == 2:
                return 2
    return best if best <= cap else cap + 1


def write_alist(code: LiftedCode, path) -> None:
    """Write the mod-2 parity-check matrix in alist format (1-indexed, unpadded)."""
    H = code.H.tocsc()
    n_cols, n_rows = H.shape[1], H.shape[0]
    col_lists = [H.indices[H.indptr[j]:H.indptr[j + 1]] + 1 for j in range(n_cols)]
    Hr = code.H.tocsr()
    row_lists = [Hr.indices[Hr.indptr[i]:Hr.indptr[i + 1]] + 1 for i in range(n_rows)]
    lines = [
        f"{n_cols} {n_rows}",
        f"{max(len(c) for c in col_lists)} {max(len(r) for r in row_lists)}",
        " ".join(str(len(c)) for c in col_lists),
        " ".join(str(len(r)) for r in row_lists),
    ]
    lines += [" ".join(str(x) for x in c) for c in col_lists]
    lines += [" ".join(str(x) for x in r) for r in row_lists]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def save_code(code: LiftedCode, prefix) -> tuple:
    """Write <prefix>.alist and <prefix>.json (exact rebuild metadata)."""
    alist_path = f"{prefix}.alist"
    meta_path = f"{prefix}.json"
    write_alist(code, alist_path)
    with open(meta_path, "w") as fh:
        json.dump(code.to_dict(), fh, sort_keys=True, indent=1)
        fh.write("\n")
    return alist_path, meta_path


def load_code(meta_path) -> LiftedCode:
    with open(meta_path) as fh:
        return LiftedCode.from_dict(json.load(fh))
