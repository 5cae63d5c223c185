"""Protograph base matrices for nonsystematic MacKay-Neal LDPC ensembles.

A base matrix B is an n0 x (h0 + n0) nonnegative integer matrix. The first
h0 columns are punctured variable-node types (they carry the sparse outer
word), the remaining n0 columns are transmitted types. Entries are edge
multiplicities between a check-node type (row) and a variable-node type
(column). The right n0 x n0 part must lift to an invertible square matrix
so the inner code can be encoded by back-substitution through H2^-1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DEFAULT_ENTRY_CAP = 3


class BaseMatrixError(ValueError):
    """Structurally invalid base matrix."""


class ZeroRowError(BaseMatrixError):
    pass


class ZeroColumnError(BaseMatrixError):
    pass


class NonSquareInnerError(BaseMatrixError):
    pass


class EntryCapError(BaseMatrixError):
    pass


@dataclass(frozen=True)
class BaseMatrix:
    """Validated protograph base matrix with puncturing split.

    Attributes
    ----------
    entries : tuple of tuple of int
        Row-major multiplicities, shape (n0, h0 + n0).
    h0 : int
        Number of punctured (leftmost) variable-node types.
    """

    entries: tuple
    h0: int

    @property
    def n0(self) -> int:
        return len(self.entries)

    @property
    def n_vn_types(self) -> int:
        return len(self.entries[0])

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    @property
    def rate_inner(self) -> Fraction:
        """Design rate of the inner code, h0/n0 (punctured bits per channel use)."""
        return Fraction(self.h0, self.n0)

    @property
    def rate_mother(self) -> Fraction:
        """Rate of the unpunctured mother code, h0/(h0 + n0)."""
        return Fraction(self.h0, self.h0 + self.n0)

    def protograph(self) -> "Protograph":
        return Protograph.from_base(self)

    def to_dict(self) -> dict:
        return {"h0": self.h0, "rows": [list(r) for r in self.entries]}

    def __str__(self) -> str:
        rows = []
        for r in self.entries:
            left = " ".join(str(x) for x in r[: self.h0])
            right = " ".join(str(x) for x in r[self.h0 :])
            rows.append(f"[{left} | {right}]")
        return "\n".join(rows)


def validate_base_matrix(rows, h0: int, entry_cap: int = DEFAULT_ENTRY_CAP) -> BaseMatrix:
    """Validate raw multiplicities and return an immutable BaseMatrix.

    Parameters
    ----------
    rows : sequence of sequence of int
        Candidate matrix, n0 rows by h0 + n0 columns.
    h0 : int
        Punctured column count; the remaining block must be square (n0 x n0).
    entry_cap : int
        Maximum allowed multiplicity per entry.

    Raises
    ------
    NonSquareInnerError, ZeroRowError, ZeroColumnError, EntryCapError
        On the corresponding structural violation.
    """
    mat = [tuple(int(x) for x in r) for r in rows]
    if not mat or not mat[0]:
        raise BaseMatrixError("empty matrix")
    n0 = len(mat)
    width = len(mat[0])
    if any(len(r) != width for r in mat):
        raise BaseMatrixError("ragged rows")
    if h0 < 1:
        raise BaseMatrixError(f"h0 must be >= 1, got {h0}")
    if width != h0 + n0:
        raise NonSquareInnerError(
            f"need h0 + n0 = {h0} + {n0} columns for a square inner part, got {width}"
        )
    for i, r in enumerate(mat):
        for j, x in enumerate(r):
            if x < 0:
                raise BaseMatrixError(f"negative entry at ({i},{j})")
            if x > entry_cap:
                raise EntryCapError(f"entry {x} at ({i},{j}) exceeds cap {entry_cap}")
        if sum(r) == 0:
            raise ZeroRowError(f"check-node type {i} has degree 0")
    for j in range(width):
        if sum(r[j] for r in mat) == 0:
            raise ZeroColumnError(f"variable-node type {j} has degree 0")
    return BaseMatrix(entries=tuple(mat), h0=h0)


def ensemble_rates(base: BaseMatrix) -> tuple[Fraction, Fraction]:
    """Return (inner rate h0/n0, mother-code rate h0/(h0+n0)) as exact fractions."""
    return base.rate_inner, base.rate_mother


@dataclass(frozen=True)
class Protograph:
    """Edge-level view of a base matrix.

    Edges are numbered row-major over (cn type, vn type), with parallel edges
    consecutive, so edge ordering is a deterministic function of the matrix.
    """

    base: BaseMatrix
    edge_cn: tuple        # edge -> cn type
    edge_vn: tuple        # edge -> vn type
    edges_at_cn: tuple    # cn type -> tuple of edge ids
    edges_at_vn: tuple    # vn type -> tuple of edge ids

    @classmethod
    def from_base(cls, base: BaseMatrix) -> "Protograph":
        ecn, evn = [], []
        at_cn = [[] for _ in range(base.n0)]
        at_vn = [[] for _ in range(base.n_vn_types)]
        e = 0
        for i, row in enumerate(base.entries):
            for j, mult in enumerate(row):
                for _ in range(mult):
                    ecn.append(i)
                    evn.append(j)
                    at_cn[i].append(e)
                    at_vn[j].append(e)
                    e += 1
        return cls(
            base=base,
            edge_cn=tuple(ecn),
            edge_vn=tuple(evn),
            edges_at_cn=tuple(tuple(x) for x in at_cn),
            edges_at_vn=tuple(tuple(x) for x in at_vn),
        )

    @property
    def n_edges(self) -> int:
        return len(self.edge_cn)

    @property
    def h0(self) -> int:
        return self.base.h0

    @property
    def n0(self) -> int:
        return self.base.n0

    def cn_degree(self, i: int) -> int:
        return len(self.edges_at_cn[i])

    def vn_degree(self, j: int) -> int:
        return len(self.edges_at_vn[j])


def base_matrix_from_dict(d: dict, entry_cap: int = DEFAULT_ENTRY_CAP) -> BaseMatrix:
    try:
        rows = d["rows"]
        h0 = int(d["h0"])
    except KeyError as exc:
        raise BaseMatrixError(f"missing key {exc} in base-matrix dict") from exc
    return validate_base_matrix(rows, h0, entry_cap=entry_cap)


def load_base_matrix(path, entry_cap: int = DEFAULT_ENTRY_CAP) -> BaseMatrix:
    """Load a base matrix from a JSON file {"h0": int, "rows": [[...], ...]}."""
    with open(path, "r") as fh:
        return base_matrix_from_dict(json.load(fh), entry_cap=entry_cap)


def save_base_matrix(base: BaseMatrix, path) -> None:
    with open(path, "w") as fh:
        json.dump(base.to_dict(), fh, indent=1, sort_keys=True)
        fh.write("\n")
