from math import comb, erfc, sqrt

import numpy as np
import pytest

from protomn import catalog
from protomn.bounds import (
    SpectrumList,
    low_weight_search,
    pep,
    tub_code,
    union_bound_ensemble,
)
from protomn.channels import ChannelParams, apriori_llr
from protomn.lifting import lift_circulant_peg
from protomn.matcher import DmConfig


def qfunc(x):
    return 0.5 * erfc(x / sqrt(2.0))


def test_pep_collapses_at_half_weight():
    # omega = 1/2 makes the prior useless; input weight stops mattering
    cfg = DmConfig(8, 4)
    params = ChannelParams.from_sigma(1.0)
    want = qfunc(sqrt(3.0))
    for a in (1, 2, 5, 8):
        assert pep(a, 3, cfg, params) == pytest.approx(want, rel=1e-12)


def test_pep_matches_hypergeometric_sum():
    h, k, a, b = 6, 2, 2, 3
    cfg = DmConfig(h, k)
    params = ChannelParams.from_sigma(0.8)
    sigma = params.sigma
    delta = apriori_llr(cfg.omega)
    want = 0.0
    for e in range(0, min(a, k) + 1):
        p_e = comb(k, e) * comb(h - k, a - e) / comb(h, a)
        arg = (2.0 * b / sigma**2 + (a - 2.0 * e) * delta) / (2.0 * sqrt(b) / sigma)
        want += p_e * qfunc(arg)
    assert pep(a, b, cfg, params) == pytest.approx(want, rel=1e-12)


def test_pep_vanishes_at_high_snr():
    cfg = DmConfig(10, 2)
    assert pep(2, 4, cfg, ChannelParams(30.0)) < 1e-12
    assert pep(2, 4, cfg, ChannelParams(-3.0)) > 1e-6


def test_pep_monotone_in_snr():
    cfg = DmConfig(12, 3)
    vals = [pep(3, 5, cfg, ChannelParams(s)) for s in np.linspace(-4, 8, 13)]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_spectrum_list_basics():
    sl = SpectrumList.from_counts({(2, 4): 3, (1, 2): 1})
    assert sl.entries == ((1, 2, 1), (2, 4, 3))
    assert sl.min_total_weight() == 3
    back = SpectrumList.from_json(sl.to_json())
    assert back.entries == sl.entries


def test_spectrum_list_merge():
    a = SpectrumList.from_counts({(2, 4): 3})
    b = SpectrumList.from_counts({(2, 4): 2, (1, 6): 1})
    merged = a.merge(b)
    assert dict(((x, y), m) for x, y, m in merged.entries) == {(2, 4): 5, (1, 6): 1}


def test_spectrum_list_rejects_zero_word():
    with pytest.raises(ValueError):
        SpectrumList.from_counts({(0, 0): 1})


def test_union_bound_empty_cap():
    p = catalog.get("toy23")
    ub = union_bound_ensemble(p, 2, 0.25, ChannelParams(2.0), weight_cap=(0, 0))
    assert ub.value == 0.0
    assert ub.terms == ()


def test_union_bound_monotone_in_snr():
    p = catalog.get("toy23")
    vals = [
        union_bound_ensemble(p, 4, 0.25, ChannelParams(s), weight_cap=(4, 8)).value
        for s in (0.0, 2.0, 4.0, 6.0)
    ]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_union_bound_is_pep_weighted_sum():
    from protomn.spectrum import avg_io_weight_enum

    p = catalog.get("toy23")
    ell, omega = 3, 1 / 3
    params = ChannelParams(1.0)
    cfg = DmConfig(p.h0 * ell, max(1, round(omega * p.h0 * ell)))
    ub = union_bound_ensemble(p, ell, omega, params, weight_cap=(2, 4))
    want = sum(
        float(avg_io_weight_enum(p, ell, a, b)) * pep(a, b, cfg, params)
        for a in range(0, 3)
        for b in range(0, 5)
        if (a, b) != (0, 0)
    )
    assert ub.value == pytest.approx(want, rel=1e-9)


def test_tub_code_weighted_sum_and_empty():
    sl = SpectrumList.from_counts({(2, 4): 3, (1, 2): 1})
    cfg = DmConfig(20, 5)
    params = ChannelParams(1.5)
    want = 3 * pep(2, 4, cfg, params) + 1 * pep(1, 2, cfg, params)
    assert tub_code(sl, cfg, params) == pytest.approx(want, rel=1e-12)
    with pytest.raises(ValueError):
        tub_code(SpectrumList.from_counts({}), cfg, params)


def test_low_weight_search_harvest():
    code = lift_circulant_peg(catalog.get("r12"), 25, seed=0)
    out = low_weight_search(code, effort=3000, seed=1)
    again = low_weight_search(code, effort=3000, seed=1)
    assert out.entries == again.entries
    assert len(out.entries) > 0
    for a, b, mult in out.entries:
        assert a + b >= 1
        assert 0 <= a <= code.h and 0 <= b <= code.n
        assert mult >= 1
    # harvested pairs are real codeword weights: parity forces b >= 2 here
    assert min(b for _, b, _ in out.entries) >= 2


def test_low_weight_search_effort_validation():
    code = lift_circulant_peg(catalog.get("r12"), 25, seed=0)
    with pytest.raises(ValueError):
        low_weight_search(code, effort=0)
