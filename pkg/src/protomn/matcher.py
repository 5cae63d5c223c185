"""Fixed-to-fixed constant-composition distribution matcher.

Messages m in [0, M) with M = C(h, k) are mapped bijectively to binary words
of length h and Hamming weight exactly k through the combinatorial number
system: supports are ordered lexicographically as sorted position tuples
(leftmost bit = position 1), and index 0 is the smallest support (1, ..., k).
The matcher emulates a memoryless Bernoulli(omega) source with omega = k/h at
a rate loss that vanishes in h: R_O = log2(M)/h -> H_b(omega).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .channels import binary_entropy, binary_entropy_inv


class MessageRangeError(ValueError):
    """Message index outside [0, M)."""


class CompositionMismatchError(ValueError):
    """Word length or weight differs from the matcher composition."""


def _log2_bigint(n: int) -> float:
    """log2 of a positive int without float overflow."""
    bl = n.bit_length()
    if bl <= 53:
        return math.log2(n)
    shift = bl - 53
    return math.log2(n >> shift) + shift


@dataclass(frozen=True)
class DmConfig:
    """Constant-composition matcher parameters: block length h, weight k."""

    h: int
    k: int

    def __post_init__(self):
        if self.h < 1:
            raise ValueError("h must be >= 1")
        if not 0 < self.k <= self.h:
            raise ValueError(f"need 0 < k <= h, got k={self.k}, h={self.h}")

    @cached_property
    def num_messages(self) -> int:
        """M = C(h, k), exact."""
        return math.comb(self.h, self.k)

    @property
    def omega(self) -> float:
        return self.k / self.h

    @cached_property
    def rate_out(self) -> float:
        """Exact matcher rate log2(C(h,k))/h in bits per output bit."""
        return _log2_bigint(self.num_messages) / self.h


@dataclass(frozen=True)
class DmRate:
    rate_out: float
    entropy_limit: float


def dm_rate(cfg: DmConfig) -> DmRate:
    """Exact matcher rate and its asymptotic limit H_b(k/h)."""
    return DmRate(rate_out=cfg.rate_out, entropy_limit=binary_entropy(cfg.omega))


def cc_encode(m: int, cfg: DmConfig) -> np.ndarray:
    """Map message index m to the m-th weight-k word of length h (unranking).

    Runs in O(h) exact-integer steps by updating the running binomial
    coefficient incrementally instead of recomputing it per position.
    """
    m = int(m)
    if not 0 <= m < cfg.num_messages:
        raise MessageRangeError(f"m={m} outside [0, {cfg.num_messages})")
    h, k = cfg.h, cfg.k
    v = np.zeros(h, dtype=np.uint8)
    r = m
    j = k                          # slots still to fill
    c = math.comb(h - 1, k - 1)    # words whose first set bit is position 1
    for p in range(h):
        if j == 0:
            break
        # c == C(h-p-1, j-1): words (among those remaining) that set position p
        if r < c:
            v[p] = 1
            n = h - p - 1
            c = c * (j - 1) // n if n > 0 else 0
            j -= 1
        else:
            r -= c
            n = h - p - 1
            c = c * (n - j + 1) // n if n > 0 else 0
    return v


def cc_decode(v: np.ndarray, cfg: DmConfig) -> int:
    """Inverse of cc_encode: rank a weight-k word back to its message index."""
    v = np.asarray(v)
    if v.shape != (cfg.h,):
        raise CompositionMismatchError(f"word length {v.shape} != ({cfg.h},)")
    if int(np.count_nonzero(v)) != cfg.k:
        raise CompositionMismatchError(
            f"weight {int(np.count_nonzero(v))} != k={cfg.k}"
        )
    h, k = cfg.h, cfg.k
    r = 0
    j = k
    c = math.comb(h - 1, k - 1)
    for p in range(h):
        if j == 0:
            break
        if v[p]:
            n = h - p - 1
            c = c * (j - 1) // n if n > 0 else 0
            j -= 1
        else:
            r += c
            n = h - p - 1
            c = c * (n - j + 1) // n if n > 0 else 0
    return r


def omega_for_rate(rate_total: float, rate_inner) -> float:
    """Weight fraction omega <= 1/2 so that H_b(omega) * rate_inner = rate_total."""
    ri = float(rate_inner)
    if not 0 < rate_total <= ri:
        raise ValueError(f"rate {rate_total} outside (0, {ri}]")
    return binary_entropy_inv(rate_total / ri)


def k_for_rate(h: int, rate_total: float, rate_inner) -> int:
    """Integer DM weight realizing the requested total rate at block length h."""
    k = round(omega_for_rate(rate_total, rate_inner) * h)
    return max(1, min(h, k))
