"""Bundled base matrices.

Keys are stable CLI-facing names. "r12" is a rate-1/2 inner design found by
the differential-evolution search without an ensemble-typicality constraint;
"r23a"/"r23b" are rate-2/3 inner designs without / with the constraint that
the ensemble growth rate be negative near the origin. The toy and all-ones
matrices are small references used in enumerator and classification demos.
"""

from .protograph import BaseMatrix, validate_base_matrix

_RAW = {
    "toy23": {
        "h0": 1,
        "rows": [[1, 2, 0], [1, 1, 2]],
    },
    "r12": {
        "h0": 2,
        "rows": [
            [1, 0, 1, 1, 0, 0],
            [0, 1, 0, 3, 0, 1],
            [2, 0, 1, 1, 1, 0],
            [1, 2, 1, 2, 0, 0],
        ],
    },
    "r23a": {
        "h0": 2,
        "rows": [
            [1, 0, 0, 3, 1],
            [1, 1, 0, 3, 0],
            [1, 2, 2, 1, 0],
        ],
    },
    "r23b": {
        "h0": 2,
        "rows": [
            [3, 3, 3, 0, 0],
            [0, 1, 3, 1, 0],
            [1, 0, 2, 0, 1],
        ],
    },
    "ones2x3": {
        "h0": 1,
        "rows": [[1, 1, 1], [1, 1, 1]],
    },
    "ones3x4": {
        "h0": 1,
        "rows": [[1, 1, 1, 1], [1, 1, 1, 1], [1, 1, 1, 1]],
    },
}


def names() -> list:
    return sorted(_RAW.keys())


def get(name: str) -> BaseMatrix:
    """Return a bundled base matrix by name. KeyError lists valid names."""
    try:
        raw = _RAW[name]
    except KeyError:
        raise KeyError(f"unknown base matrix {name!r}; choose from {names()}") from None
    return validate_base_matrix(raw["rows"], raw["h0"])
