import numpy as np
import pytest

from protomn.channels import ChannelParams, apriori_llr, biawgn_sample, bpsk_map
from protomn.decoder import DecoderConfig, bp_decode, init_llrs, mn_transmit_decode
from protomn.matcher import DmConfig, cc_encode


def test_config_validation():
    with pytest.raises(ValueError):
        DecoderConfig(max_iterations=0)
    with pytest.raises(ValueError):
        DecoderConfig(llr_clip=-1.0)


def test_init_llrs_layout(r12_code):
    params = ChannelParams(0.0)
    omega = 0.2
    y = np.ones(r12_code.n)
    L = init_llrs(y, params, omega, r12_code)
    assert L.shape == (r12_code.h + r12_code.n,)
    # punctured coordinates carry the a-priori LLR, transmitted ones 2y/sigma^2
    assert np.allclose(L[: r12_code.h], apriori_llr(omega))
    assert np.allclose(L[r12_code.h :], 2.0 * y / params.sigma**2)


def test_bp_decodes_clean_codeword(r12_code, rng):
    cfg = DecoderConfig()
    u = np.zeros(r12_code.h, dtype=np.uint8)
    u[rng.choice(r12_code.h, size=10, replace=False)] = 1
    word = r12_code.codeword(u)
    # noiseless LLRs: strongly correct sign everywhere
    L = 20.0 * (1.0 - 2.0 * word.astype(np.float64))
    res = bp_decode(L, r12_code, cfg)
    assert res.syndrome_ok
    assert res.iterations <= 1
    assert np.array_equal(res.v_hat, u)
    assert np.array_equal(res.c_hat, word[r12_code.h :])


def test_bp_recovers_from_noise(r12_code, rng):
    params = ChannelParams(4.0)
    cfg = DecoderConfig()
    omega = 10 / r12_code.h
    ok = 0
    for _ in range(20):
        u = np.zeros(r12_code.h, dtype=np.uint8)
        u[rng.choice(r12_code.h, size=10, replace=False)] = 1
        word = r12_code.codeword(u)
        y = biawgn_sample(word[r12_code.h :], params, rng)
        L = init_llrs(y, params, omega, r12_code)
        res = bp_decode(L, r12_code, cfg)
        ok += res.syndrome_ok and np.array_equal(res.v_hat, u)
    assert ok >= 18


def test_early_stop_matches_full_run(r12_code, rng):
    params = ChannelParams(4.0)
    u = np.zeros(r12_code.h, dtype=np.uint8)
    u[:4] = 1
    word = r12_code.codeword(u)
    y = biawgn_sample(word[r12_code.h :], params, rng)
    L = init_llrs(y, params, 4 / r12_code.h, r12_code)
    res_stop = bp_decode(L, r12_code, DecoderConfig(early_stop=True))
    res_full = bp_decode(L, r12_code, DecoderConfig(early_stop=False))
    assert res_stop.syndrome_ok and res_full.syndrome_ok
    assert np.array_equal(res_stop.v_hat, res_full.v_hat)
    assert res_full.iterations == DecoderConfig().max_iterations
    assert res_stop.iterations < res_full.iterations


def test_syndrome_flag_consistent(r12_code, rng):
    # garbage input at low SNR: whatever the flag says must match H v
    params = ChannelParams(-6.0)
    y = rng.normal(size=r12_code.n)
    L = init_llrs(y, params, 0.25, r12_code)
    res = bp_decode(L, r12_code, DecoderConfig(max_iterations=10))
    word = np.concatenate([res.v_hat, res.c_hat])
    assert res.syndrome_ok == (not r12_code.syndrome(word).any())


def test_composition_flag(r12_code):
    u = np.zeros(r12_code.h, dtype=np.uint8)
    u[:6] = 1
    word = r12_code.codeword(u)
    L = 20.0 * (1.0 - 2.0 * word.astype(np.float64))
    assert bp_decode(L, r12_code, expected_weight=6).composition_ok
    assert not bp_decode(L, r12_code, expected_weight=5).composition_ok


def test_mn_transmit_decode_high_snr(r12_code, rng):
    dm = DmConfig(r12_code.h, 10)
    params = ChannelParams(6.0)
    cfg = DecoderConfig()
    for m in (0, 17, int(dm.num_messages) - 1):
        fr = mn_transmit_decode(m, dm, r12_code, params, cfg, rng)
        assert not fr.failure
        assert fr.m_hat == m
        assert fr.decode.syndrome_ok and fr.decode.composition_ok


def test_mn_transmit_decode_flags_failure(r12_code, rng):
    dm = DmConfig(r12_code.h, 10)
    params = ChannelParams(-12.0)
    cfg = DecoderConfig(max_iterations=15)
    fails = 0
    for m in range(10):
        fr = mn_transmit_decode(m, dm, r12_code, params, cfg, rng)
        fails += fr.failure is not None
        if fr.failure is not None:
            assert fr.failure == "composition"
            assert fr.m_hat is None
    assert fails >= 8


def test_llr_clip_bounds_messages(r12_code):
    u = np.zeros(r12_code.h, dtype=np.uint8)
    word = r12_code.codeword(u)
    L = 1e6 * (1.0 - 2.0 * word.astype(np.float64))
    res = bp_decode(L, r12_code, DecoderConfig(llr_clip=20.0))
    assert res.syndrome_ok
    assert np.array_equal(res.v_hat, u)
