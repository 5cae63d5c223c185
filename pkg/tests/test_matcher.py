"""Constant-composition matcher: bijectivity, ordering, weight exactness."""

from itertools import combinations
from math import comb

import numpy as np
import pytest

from protomn.matcher import (
    CompositionMismatchError,
    DmConfig,
    MessageRangeError,
    cc_decode,
    cc_encode,
    dm_rate,
    k_for_rate,
    omega_for_rate,
)


def test_config_derived_quantities():
    cfg = DmConfig(6, 2)
    assert cfg.num_messages == comb(6, 2)
    assert cfg.omega == pytest.approx(2 / 6)
    assert cfg.rate_out == pytest.approx(np.log2(comb(6, 2)) / 6)


def test_encode_first_message_smallest_word():
    # m = 0 maps to the lexicographically first support
    cfg = DmConfig(3, 3)
    assert np.array_equal(cc_encode(0, cfg), np.ones(3, dtype=np.uint8))
    cfg = DmConfig(5, 2)
    w = cc_encode(0, cfg)
    assert list(np.flatnonzero(w)) == [0, 1]


def test_unranking_matches_combinations_order():
    cfg = DmConfig(8, 3)
    for m, support in enumerate(combinations(range(8), 3)):
        w = cc_encode(m, cfg)
        assert tuple(np.flatnonzero(w)) == support
        assert cc_decode(w, cfg) == m


def test_roundtrip_exhaustive_small():
    for h in (1, 2, 5, 9):
        for k in range(1, h + 1):
            cfg = DmConfig(h, k)
            for m in range(cfg.num_messages):
                w = cc_encode(m, cfg)
                assert w.sum() == k
                assert cc_decode(w, cfg) == m


def test_weight_exact_large():
    import random

    cfg = DmConfig(2000, 417)
    picks = random.Random(0)
    for _ in range(50):
        m = picks.randrange(cfg.num_messages)
        w = cc_encode(m, cfg)
        assert int(w.sum()) == 417
        assert cc_decode(w, cfg) == m


def test_message_out_of_range():
    cfg = DmConfig(6, 2)
    with pytest.raises(MessageRangeError):
        cc_encode(cfg.num_messages, cfg)
    with pytest.raises(MessageRangeError):
        cc_encode(-1, cfg)


def test_decode_rejects_wrong_weight():
    cfg = DmConfig(6, 2)
    bad = np.zeros(6, dtype=np.uint8)
    bad[:3] = 1
    with pytest.raises(CompositionMismatchError):
        cc_decode(bad, cfg)


def test_rate_never_exceeds_entropy_limit():
    for h, k in ((10, 3), (64, 9), (257, 100), (1000, 499)):
        r = dm_rate(DmConfig(h, k))
        assert r.rate_out <= r.entropy_limit + 1e-12


def test_omega_for_rate_consistency():
    # H_b(omega) * r_inner == rate
    from protomn.channels import binary_entropy

    for rate, ri in ((0.5, 0.5), (0.2, 2 / 3), (0.3, 0.5)):
        w = omega_for_rate(rate, ri)
        assert 0.0 < w <= 0.5
        assert binary_entropy(w) * ri == pytest.approx(rate, abs=1e-10)


def test_omega_for_rate_bounds():
    with pytest.raises(ValueError):
        omega_for_rate(0.6, 0.5)
    with pytest.raises(ValueError):
        omega_for_rate(0.0, 0.5)


def test_k_for_rate_rounds_composition():
    h = 600
    k = k_for_rate(h, 0.5, 0.5)
    assert k == round(omega_for_rate(0.5, 0.5) * h) == 300
    # clamped to a usable composition at extremes
    assert k_for_rate(4, 1e-6, 0.5) == 1


def test_weight_zero_composition_rejected():
    with pytest.raises(ValueError):
        DmConfig(6, 0)
