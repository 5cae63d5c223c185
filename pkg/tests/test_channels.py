import numpy as np
import pytest

from protomn.channels import (
    ChannelParams,
    RateAboveCapError,
    apriori_llr,
    apriori_sample,
    biawgn_sample,
    binary_entropy,
    binary_entropy_inv,
    bpsk_map,
    capacity_biawgn,
    capacity_bsc,
    channel_llrs,
    shannon_limit_inverse,
)


def test_sigma_from_es_n0():
    p = ChannelParams(0.0)
    # Es/N0 = 1/(2 sigma^2)
    assert p.sigma == pytest.approx(np.sqrt(0.5), rel=1e-12)
    assert ChannelParams(3.0).sigma < p.sigma


def test_from_sigma_roundtrip():
    p = ChannelParams.from_sigma(0.9)
    assert p.sigma == pytest.approx(0.9, rel=1e-12)
    assert ChannelParams(p.es_n0_db).sigma == pytest.approx(0.9, rel=1e-12)


def test_bpsk_map():
    x = bpsk_map(np.array([0, 1, 0, 1], dtype=np.uint8))
    assert np.array_equal(x, np.array([1.0, -1.0, 1.0, -1.0]))


def test_channel_llrs_scale():
    p = ChannelParams.from_sigma(1.0)
    y = np.array([0.5, -0.25])
    # L = 2y/sigma^2
    assert channel_llrs(y, p) == pytest.approx([1.0, -0.5])


def test_biawgn_sample_statistics(rng):
    p = ChannelParams.from_sigma(0.8)
    bits = np.zeros(200000, dtype=np.uint8)
    y = biawgn_sample(bits, p, rng)
    assert y.mean() == pytest.approx(1.0, abs=0.01)
    assert y.std() == pytest.approx(0.8, abs=0.01)


def test_binary_entropy_basics():
    assert binary_entropy(0.5) == pytest.approx(1.0, rel=1e-12)
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(0.11) == pytest.approx(0.4999, abs=5e-4)


def test_binary_entropy_inv_roundtrip():
    for target in (0.05, 0.3, 0.5, 0.9, 0.999):
        w = binary_entropy_inv(target)
        assert 0.0 < w <= 0.5
        assert binary_entropy(w) == pytest.approx(target, abs=1e-10)


def test_apriori_llr_sign_and_zero():
    assert apriori_llr(0.5) == 0.0
    assert apriori_llr(0.2) > 0.0
    assert apriori_llr(0.2) == pytest.approx(np.log(0.8 / 0.2), rel=1e-12)


def test_apriori_sample_exact_weight(rng):
    for _ in range(20):
        v = apriori_sample(40, 11, rng)
        assert v.sum() == 11
        assert v.shape == (40,)
        assert set(np.unique(v)) <= {0, 1}


def test_capacity_biawgn_monotone_and_limits():
    snrs = np.linspace(-10, 10, 9)
    caps = [capacity_biawgn(s) for s in snrs]
    assert all(b > a for a, b in zip(caps, caps[1:]))
    # binary input is dominated by the Gaussian-input capacity and by 1 bit
    for s, c in zip(snrs, caps):
        assert 0.0 < c < min(1.0, 0.5 * np.log2(1.0 + 2.0 * 10 ** (s / 10)))
    assert caps[-1] > 0.95


def test_capacity_bsc_matches_entropy():
    for w in (0.05, 0.2, 0.4):
        assert capacity_bsc(w) == pytest.approx(1.0 - binary_entropy(w), rel=1e-12)


def test_shannon_limit_inverse_is_capacity_inverse():
    for rate in (0.1, 0.3, 0.5, 0.8):
        g = shannon_limit_inverse(rate)
        assert capacity_biawgn(g) == pytest.approx(rate, abs=1e-6)


def test_shannon_limit_inverse_rejects_unachievable():
    with pytest.raises(RateAboveCapError):
        shannon_limit_inverse(1.0)
    with pytest.raises(RateAboveCapError):
        shannon_limit_inverse(1.2)
