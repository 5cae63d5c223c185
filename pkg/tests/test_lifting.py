import numpy as np
import pytest

from protomn import catalog
from protomn.lifting import (
    LiftTooSmallError,
    SingularH2Error,
    girth,
    h2_base_invertible_mod2,
    lift_circulant_peg,
    lift_uniform_random,
    load_code,
    save_code,
    write_alist,
)
from protomn.protograph import validate_base_matrix


def test_dimensions_and_degree_preservation(r12_base):
    ell = 8
    code = lift_circulant_peg(r12_base, ell, seed=3)
    n0 = r12_base.n0
    nt = r12_base.h0 + n0
    assert code.H.shape == (n0 * ell, nt * ell)
    assert code.n == n0 * ell and code.h == r12_base.h0 * ell
    H = code.H.toarray()
    col_deg = H.sum(axis=0)
    row_deg = H.sum(axis=1)
    for j in range(nt):
        want = sum(row[j] for row in r12_base.entries)
        assert (col_deg[j * ell : (j + 1) * ell] == want).all()
    for i in range(n0):
        assert (row_deg[i * ell : (i + 1) * ell] == sum(r12_base.entries[i])).all()


def test_edge_count(r12_base):
    ell = 6
    code = lift_uniform_random(r12_base, ell, seed=0)
    assert code.num_edges == ell * sum(sum(r) for r in r12_base.entries)


def test_seed_determinism(r12_base):
    a = lift_circulant_peg(r12_base, 12, seed=7)
    b = lift_circulant_peg(r12_base, 12, seed=7)
    assert list(a.shifts) == list(b.shifts)
    assert (a.H != b.H).nnz == 0
    c = lift_circulant_peg(r12_base, 12, seed=8)
    assert list(a.shifts) != list(c.shifts)


def test_lift_too_small_for_parallel_edges():
    base = validate_base_matrix([[3, 1, 1], [1, 1, 1]], h0=1)
    with pytest.raises(LiftTooSmallError):
        lift_circulant_peg(base, 2, seed=0)
    code = lift_circulant_peg(base, 5, seed=0)
    # parallel edges must take distinct shifts
    assert code.H[:5, :5].toarray().sum(axis=1).max() == 3


def test_uniform_ell1_reduces_to_base_mod2():
    base = validate_base_matrix([[1, 0, 1, 1], [0, 1, 1, 0]], h0=2)
    code = lift_uniform_random(base, 1, seed=4)
    assert np.array_equal(code.H.toarray(), np.array(base.entries, dtype=np.int8))


def test_h2_base_invertibility_detection():
    assert h2_base_invertible_mod2(catalog.get("r12"))
    assert h2_base_invertible_mod2(catalog.get("r23b"))
    assert not h2_base_invertible_mod2(catalog.get("r23a"))
    assert not h2_base_invertible_mod2(catalog.get("toy23"))


def test_structurally_singular_base_lifts_marked(r23a_base):
    # every lift of a mod-2 singular inner block is singular; the
    # constructor returns the draw instead of retrying forever
    code = lift_circulant_peg(r23a_base, 10, seed=0)
    assert not code.h2_invertible
    with pytest.raises(SingularH2Error):
        code.encode(np.zeros(code.h, dtype=np.uint8))
    uni = lift_uniform_random(r23a_base, 10, seed=0)
    assert not uni.h2_invertible


def test_invertible_lift_encodes(r12_code, rng):
    for _ in range(5):
        u = rng.integers(0, 2, size=r12_code.h).astype(np.uint8)
        word = r12_code.codeword(u)
        assert word.shape == (r12_code.h + r12_code.n,)
        assert not r12_code.syndrome(word).any()


def test_peg_girth_at_least_uniform(r12_base):
    wins = 0
    trials = 20
    for seed in range(trials):
        g_peg = girth(lift_circulant_peg(r12_base, 8, seed=seed), cap=12)
        g_uni = girth(lift_uniform_random(r12_base, 8, seed=seed), cap=12)
        wins += g_peg >= g_uni
    assert wins >= 0.9 * trials


def test_peg_circulant_avoids_short_cycles(r12_base):
    code = lift_circulant_peg(r12_base, 16, seed=0)
    assert girth(code, cap=12) >= 6


def test_girth_detects_parallel_edge_collision(toy_base):
    # uniform lifts may map parallel edges identically, creating 2-cycles
    seen = min(girth(lift_uniform_random(toy_base, 2, seed=s), cap=8) for s in range(10))
    assert seen == 2


def test_save_load_roundtrip(tmp_path, r12_base):
    code = lift_circulant_peg(r12_base, 9, seed=5)
    alist_path, meta_path = save_code(code, tmp_path / "code")
    assert str(alist_path).endswith(".alist")
    back = load_code(meta_path)
    assert back.ell == code.ell and back.seed == code.seed and back.method == code.method
    assert back.base == code.base
    assert (back.H != code.H).nnz == 0


def test_alist_format(tmp_path, r12_code):
    path = tmp_path / "c.alist"
    write_alist(r12_code, path)
    lines = path.read_text().split("\n")
    n_cols, n_rows = map(int, lines[0].split())
    assert (n_cols, n_rows) == (r12_code.num_vns, r12_code.num_checks)
    max_col, max_row = map(int, lines[1].split())
    H = r12_code.H.toarray()
    assert max_col == H.sum(axis=0).max() and max_row == H.sum(axis=1).max()
    col_deg = list(map(int, lines[2].split()))
    assert col_deg == [int(x) for x in H.sum(axis=0)]
    # adjacency lists are 1-indexed
    first_col = sorted(int(x) for x in lines[4].split() if int(x) > 0)
    assert first_col == [int(i) + 1 for i in np.flatnonzero(H[:, 0])]
