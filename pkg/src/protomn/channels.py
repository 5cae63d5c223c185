"""Binary-input AWGN channel model, capacities, and the sparse a-priori channel.

Convention: Es/N0 = 1/(2 sigma^2) with unit-energy BPSK (0 -> +1, 1 -> -1),
so sigma = sqrt(1 / (2 * 10^(dB/10))). LLRs are in natural log units,
L = 2 y / sigma^2, positive = bit 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_hermite

LN2 = math.log(2.0)


class RateAboveCapError(ValueError):
    """Requested rate needs an SNR above the supported cap."""


@dataclass(frozen=True)
class ChannelParams:
    """biAWGN operating point, stored as Es/N0 in dB."""

    es_n0_db: float

    @property
    def es_n0(self) -> float:
        return 10.0 ** (self.es_n0_db / 10.0)

    @property
    def sigma(self) -> float:
        return math.sqrt(1.0 / (2.0 * self.es_n0))

    @property
    def noise_var(self) -> float:
        return 1.0 / (2.0 * self.es_n0)

    @classmethod
    def from_sigma(cls, sigma: float) -> "ChannelParams":
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        return cls(es_n0_db=10.0 * math.log10(1.0 / (2.0 * sigma * sigma)))


def bpsk_map(bits: np.ndarray) -> np.ndarray:
    """Map bits {0,1} to symbols {+1,-1}."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)


def biawgn_sample(bits: np.ndarray, params: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    """Transmit bits over the biAWGN channel, returning the noisy symbols."""
    x = bpsk_map(bits)
    return x + params.sigma * rng.standard_normal(x.shape)


def channel_llrs(y: np.ndarray, params: ChannelParams) -> np.ndarray:
    """Exact channel LLRs for biAWGN observations: L = 2 y / sigma^2."""
    return 2.0 * np.asarray(y, dtype=np.float64) / (params.sigma**2)


def apriori_llr(omega: float) -> float:
    """LLR of a Bernoulli(omega) bit: ln((1-omega)/omega)."""
    if not 0.0 < omega < 1.0:
        raise ValueError("omega must be in (0,1)")
    return math.log((1.0 - omega) / omega)


def apriori_sample(h: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a uniform weight-k binary vector of length h (uniform k-subset support)."""
    if not 0 <= k <= h:
        raise ValueError(f"need 0 <= k <= h, got k={k}, h={h}")
    v = np.zeros(h, dtype=np.uint8)
    v[rng.permutation(h)[:k]] = 1
    return v


def binary_entropy(p: float) -> float:
    """H_b(p) in bits; H_b(0) = H_b(1) = 0."""
    if p < 0.0 or p > 1.0:
        raise ValueError("p outside [0,1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def binary_entropy_inv(r: float) -> float:
    """Inverse of H_b on [0, 1/2]: the unique p <= 1/2 with H_b(p) = r."""
    if not 0.0 <= r <= 1.0:
        raise ValueError("entropy outside [0,1]")
    lo, hi = 0.0, 0.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < r:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def capacity_bsc(omega: float) -> float:
    """Capacity of the BSC with crossover omega, 1 - H_b(omega)."""
    return 1.0 - binary_entropy(omega)


_GH_NODES = 64
_gh_x, _gh_w = roots_hermite(_GH_NODES)


def capacity_biawgn(es_n0_db: float) -> float:
    """Capacity of the biAWGN channel in bits/use via Gauss-Hermite quadrature.

    C = 1 - E[log2(1 + e^{-L})] with L = 2(1 + sigma Z)/sigma^2 the channel
    LLR under the +1 symbol, Z standard normal. 64 nodes with compensated
    summation keep the quadrature error far below 1e-9 at the SNRs of
    interest.
    """
    params = ChannelParams(es_n0_db)
    sigma = params.sigma
    # E[f(Z)] = pi^{-1/2} sum_i w_i f(sqrt(2) x_i)
    z = math.sqrt(2.0) * _gh_x
    L = 2.0 * (1.0 + sigma * z) / (sigma * sigma)
    vals = _gh_w * np.logaddexp(0.0, -L) / LN2
    total = 0.0
    comp = 0.0
    for v in vals:  # Kahan
        yv = v - comp
        t = total + yv
        comp = (t - total) - yv
        total = t
    return 1.0 - total / math.sqrt(math.pi)


SHANNON_DB_CAP = 30.0


def shannon_limit_inverse(rate: float, tol_db: float = 1e-9) -> float:
    """Es/N0 in dB at which biAWGN capacity equals `rate` (bisection).

    Raises RateAboveCapError if the rate is not reachable below +30 dB.
    """
    if not 0.0 < rate < 1.0:
        raise RateAboveCapError(f"rate {rate} outside (0,1)")
    lo, hi = -40.0, SHANNON_DB_CAP
    if capacity_biawgn(hi) < rate:
        raise RateAboveCapError(f"rate {rate} needs more than {hi} dB")
    while hi - lo > tol_db:
        mid = 0.5 * (lo + hi)
        if capacity_biawgn(mid) < rate:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
