"""Bit-packed GF(2) linear algebra (uint64 words, little-endian bit order)."""

import numpy as np
from numba import njit


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack a (m, n) 0/1 matrix into (m, ceil(n/64)) uint64 rows."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    m, n = bits.shape
    words = (n + 63) // 64
    buf = np.zeros((m, words * 8), dtype=np.uint8)
    packed8 = np.packbits(bits, axis=1, bitorder="little")
    buf[:, : packed8.shape[1]] = packed8
    return buf.view(np.uint64)


def unpack_row(packed: np.ndarray, n: int) -> np.ndarray:
    """Unpack one packed row vector back to n bits."""
    return np.unpackbits(packed.view(np.uint8), bitorder="little")[:n].astype(np.uint8)


@njit(cache=True)
def gf2_invert_packed(a: np.ndarray):
    """Invert a packed n x n GF(2) matrix by Gauss-Jordan elimination.

    Returns (ok, inv); ok is False when the matrix is singular.
    """
    n = a.shape[0]
    w = a.shape[1]
    A = a.copy()
    inv = np.zeros((n, w), dtype=np.uint64)
    for i in range(n):
        inv[i, i >> 6] = np.uint64(1) << np.uint64(i & 63)
    for col in range(n):
        cw = col >> 6
        cb = np.uint64(1) << np.uint64(col & 63)
        piv = -1
        for r in range(col, n):
            if A[r, cw] & cb:
                piv = r
                break
        if piv < 0:
            return False, inv
        if piv != col:
            for t in range(w):
                tmp = A[piv, t]
                A[piv, t] = A[col, t]
                A[col, t] = tmp
                tmp = inv[piv, t]
                inv[piv, t] = inv[col, t]
                inv[col, t] = tmp
        for r in range(n):
            if r != col and (A[r, cw] & cb):
                for t in range(w):
                    A[r, t] ^= A[col, t]
                    inv[r, t] ^= inv[col, t]
    return True, inv


@njit(cache=True)
def xor_selected_rows(rows: np.ndarray, select: np.ndarray) -> np.ndarray:
    """XOR together rows[i] for every i with select[i] != 0."""
    w = rows.shape[1]
    out = np.zeros(w, dtype=np.uint64)
    for i in range(select.shape[0]):
        if select[i]:
            for t in range(w):
                out[t] ^= rows[i, t]
    return out


@njit(cache=True)
def gf2_rank_packed(a: np.ndarray) -> int:
    """Rank of a packed (m, words) GF(2) matrix (destroys a working copy)."""
    A = a.copy()
    m = A.shape[0]
    w = A.shape[1]
    rank = 0
    for col in range(w * 64):
        cw = col >> 6
        cb = np.uint64(1) << np.uint64(col & 63)
        piv = -1
        for r in range(rank, m):
            if A[r, cw] & cb:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for t in range(w):
                tmp = A[piv, t]
                A[piv, t] = A[rank, t]
                A[rank, t] = tmp
        for r in range(m):
            if r != rank and (A[r, cw] & cb):
                for t in range(w):
                    A[r, t] ^= A[rank, t]
        rank += 1
        if rank == m:
            break
    return rank
