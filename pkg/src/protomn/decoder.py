"""Belief-propagation decoding of lifted MacKay-Neal codes.

Flooding schedule, exact tanh-rule check update, message clipping, hard
decisions with ties to 0, optional early stop on a zero syndrome. The
decoder input is one LLR per variable node: the punctured nodes carry the
sparse-word prior ln((1-omega)/omega) and the transmitted nodes carry
channel LLRs 2y/sigma^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._bp import bp_flood
from .channels import ChannelParams, apriori_llr, biawgn_sample, channel_llrs
from .lifting import LiftedCode
from .matcher import DmConfig, cc_decode, cc_encode


@dataclass(frozen=True)
class DecoderConfig:
    max_iterations: int = 100
    llr_clip: float = 25.0
    early_stop: bool = True

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.llr_clip <= 0:
            raise ValueError("llr_clip must be positive")


@dataclass(frozen=True)
class DecodeResult:
    v_hat: np.ndarray
    c_hat: np.ndarray
    iterations: int
    syndrome_ok: bool
    composition_ok: bool


def init_llrs(y: np.ndarray, params: ChannelParams, omega: float,
              code: LiftedCode) -> np.ndarray:
    """Decoder input LLRs: sparse prior on punctured nodes, 2y/sigma^2 on the rest."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (code.n,):
        raise ValueError(f"observation length {y.shape} != ({code.n},)")
    L = np.empty(code.num_vns, dtype=np.float64)
    L[: code.h] = apriori_llr(omega)
    L[code.h :] = channel_llrs(y, params)
    return L


def bp_decode(L: np.ndarray, code: LiftedCode, cfg: DecoderConfig = DecoderConfig(),
              expected_weight: int | None = None) -> DecodeResult:
    """Run flooding BP on the full LLR vector and split the decision.

    composition_ok is checked against expected_weight when given (the DM
    weight k); without it the flag is vacuously True.
    """
    L = np.ascontiguousarray(L, dtype=np.float64)
    if L.shape != (code.num_vns,):
        raise ValueError(f"LLR length {L.shape} != ({code.num_vns},)")
    vn_ptr, vn_edges = code.vn_adjacency
    cn_ptr, cn_edges = code.cn_adjacency
    decisions = np.zeros(code.num_vns, dtype=np.uint8)
    iters, synd_ok = bp_flood(L, vn_ptr, vn_edges, cn_ptr, cn_edges, code.inst_vn,
                              cfg.max_iterations, cfg.llr_clip, cfg.early_stop,
                              decisions)
    v_hat = decisions[: code.h].copy()
    comp_ok = True
    if expected_weight is not None:
        comp_ok = int(v_hat.sum()) == expected_weight
    return DecodeResult(
        v_hat=v_hat,
        c_hat=decisions[code.h :].copy(),
        iterations=int(iters),
        syndrome_ok=bool(synd_ok),
        composition_ok=comp_ok,
    )


@dataclass(frozen=True)
class FrameResult:
    m_hat: int | None
    failure: str | None        # None | "composition"
    decode: DecodeResult


def mn_transmit_decode(m: int, dm: DmConfig, code: LiftedCode,
                       params: ChannelParams, cfg: DecoderConfig,
                       rng: np.random.Generator) -> FrameResult:
    """Full chain: match -> encode -> biAWGN -> BP -> composition check -> dematch."""
    if dm.h != code.h:
        raise ValueError(f"DM length {dm.h} != punctured length {code.h}")
    v = cc_encode(m, dm)
    c = code.encode(v)
    y = biawgn_sample(c, params, rng)
    L = init_llrs(y, params, dm.omega, code)
    res = bp_decode(L, code, cfg, expected_weight=dm.k)
    if not res.composition_ok:
        return FrameResult(m_hat=None, failure="composition", decode=res)
    return FrameResult(m_hat=cc_decode(res.v_hat, dm), failure=None, decode=res)
