"""Weight enumerators and growth rate.

The heavy ensemble-exhaustive oracle runs in the acceptance suite; here a
2x3 all-ones protograph is small enough to brute-force inline.
"""

from fractions import Fraction
from itertools import permutations, product

import numpy as np
import pytest

from protomn import catalog
from protomn.protograph import Protograph, validate_base_matrix
from protomn.spectrum import (
    avg_io_weight_enum,
    avg_io_weight_table,
    cn_generating_coeff,
    classify_ensemble,
    growth_grid,
    growth_rate,
    weight_feasibility,
)


def brute_coeff(ell, kappa):
    """Count ways to place kappa[g] flagged edge copies so every CN copy
    sees even parity; direct enumeration over per-edge copy subsets."""
    from itertools import combinations

    degree = len(kappa)
    count = 0
    pools = [list(combinations(range(ell), k)) for k in kappa]
    for choice in product(*pools):
        par = np.zeros(ell, dtype=int)
        for sub in choice:
            for c in sub:
                par[c] += 1
        if not (par % 2).any():
            count += 1
    return count


def test_cn_generating_coeff_examples():
    assert cn_generating_coeff(2, (1, 1)) == 2
    assert cn_generating_coeff(3, (0, 0, 0)) == 1
    assert cn_generating_coeff(1, (1, 1, 0)) == 1
    assert cn_generating_coeff(1, (1, 0, 0)) == 0


def test_cn_generating_coeff_brute_force():
    for ell in (1, 2, 3):
        for kappa in product(range(ell + 1), repeat=3):
            assert cn_generating_coeff(ell, kappa) == brute_coeff(ell, kappa), (ell, kappa)


def test_cn_generating_coeff_symmetric():
    for kappa in ((2, 1, 0), (3, 1, 2)):
        ref = cn_generating_coeff(3, kappa)
        for perm in permutations(kappa):
            assert cn_generating_coeff(3, perm) == ref


def test_enum_all_zero_word():
    p = catalog.get("toy23")
    assert avg_io_weight_enum(p, 2, 0, 0) == Fraction(1)
    assert avg_io_weight_enum(p, 5, 0, 0) == Fraction(1)


def test_enum_is_rational_and_nonnegative():
    p = catalog.get("toy23")
    for a in range(3):
        for b in range(5):
            v = avg_io_weight_enum(p, 2, a, b)
            assert isinstance(v, Fraction)
            assert v >= 0


def _exhaustive_average(base, ell):
    """Average codeword counts over every permutation assignment of a lift."""
    proto = Protograph.from_base(base)
    perms_per_edge = list(permutations(range(ell)))
    nt = base.h0 + base.n0
    counts = {}
    members = 0
    for assign in product(perms_per_edge, repeat=proto.n_edges):
        members += 1
        H = np.zeros((base.n0 * ell, nt * ell), dtype=np.uint8)
        for e in range(proto.n_edges):
            i, j = proto.edge_cn[e], proto.edge_vn[e]
            for copy in range(ell):
                H[i * ell + assign[e][copy], j * ell + copy] ^= 1
        nv = nt * ell
        for bits in range(2**nv):
            w = np.array([(bits >> t) & 1 for t in range(nv)], dtype=np.uint8)
            if not (H @ w % 2).any():
                a = int(w[: base.h0 * ell].sum())
                b = int(w[base.h0 * ell :].sum())
                counts[(a, b)] = counts.get((a, b), 0) + 1
    return {ab: Fraction(c, members) for ab, c in counts.items()}, members


def test_enum_matches_exhaustive_ensemble_average():
    base = validate_base_matrix([[1, 1, 1], [1, 1, 1]], h0=1)
    ell = 2
    avg, members = _exhaustive_average(base, ell)
    assert members == (2) ** 6  # (2!)^{n_edges}
    for a in range(base.h0 * ell + 1):
        for b in range(base.n0 * ell + 1):
            want = avg.get((a, b), Fraction(0))
            assert avg_io_weight_enum(base, ell, a, b) == want, (a, b)


def test_table_matches_pointwise():
    p = catalog.get("toy23")
    tab = avg_io_weight_table(p, 3, a_max=3, b_max=6)
    for (a, b), v in tab.items():
        assert v == avg_io_weight_enum(p, 3, a, b)
    assert tab[(0, 0)] == 1


def test_growth_solution_invariants():
    p = catalog.get("ones2x3")
    sol = growth_rate(p, 0.2, 0.3)
    theta = np.asarray(sol.theta)
    assert sol.residual < 1e-10
    assert np.all(np.asarray(sol.z) > 0)
    assert theta[: p.h0].sum() == pytest.approx(0.2, abs=1e-9)
    assert theta[p.h0 :].sum() == pytest.approx(0.3, abs=1e-9)
    assert np.isfinite(sol.G)


def test_growth_signs_near_origin():
    # all-ones 2x3 has positive growth near the origin, 3x4 negative
    assert growth_rate(catalog.get("ones2x3"), 0.01, 0.01).G > 0
    assert growth_rate(catalog.get("ones3x4"), 0.01, 0.01).G < 0


def test_growth_reduction_consistency():
    # parallel edges: reduced and unreduced solves agree
    p = catalog.get("toy23")
    a = growth_rate(p, 0.12, 0.2, reduce=True)
    b = growth_rate(p, 0.12, 0.2, reduce=False)
    assert a.G == pytest.approx(b.G, abs=1e-8)


def test_growth_grid_shape_and_nan_for_infeasible():
    p = catalog.get("ones2x3")
    pts = growth_grid(p, 0.02, 0.02, 0.01)
    assert len(pts) == 4
    alphas = sorted({round(a, 6) for a, _, _ in pts})
    assert alphas == [0.01, 0.02]
    for a, b, g in pts:
        # facet points (slack ~ 0) still get a boundary-limit value;
        # strictly infeasible pairs are reported as nan
        if weight_feasibility(p, a, b) >= -1e-9:
            assert np.isfinite(g), (a, b)
        else:
            assert np.isnan(g), (a, b)


def test_weight_feasibility_signs():
    p = catalog.get("toy23")
    assert weight_feasibility(p, 0.1, 0.2) > 0
    # heavy punctured weight with almost nothing to pair it against
    assert weight_feasibility(p, 0.49, 0.02) < 0


def test_classifier_small_matrices():
    assert classify_ensemble(catalog.get("ones2x3"), xi=0.01, step=0.005) == "bad"
