from fractions import Fraction

import pytest

from protomn import catalog
from protomn.protograph import (
    BaseMatrixError,
    EntryCapError,
    NonSquareInnerError,
    Protograph,
    ZeroColumnError,
    ZeroRowError,
    base_matrix_from_dict,
    ensemble_rates,
    load_base_matrix,
    save_base_matrix,
    validate_base_matrix,
)


def test_validate_freezes_entries():
    b = validate_base_matrix([[1, 2, 0], [1, 1, 2]], h0=1)
    assert b.entries == ((1, 2, 0), (1, 1, 2))
    assert b.h0 == 1
    assert b.n0 == 2


def test_zero_row_rejected():
    with pytest.raises(ZeroRowError):
        validate_base_matrix([[1, 1, 1], [0, 0, 0]], h0=1)


def test_zero_column_rejected():
    with pytest.raises(ZeroColumnError):
        validate_base_matrix([[0, 2, 1], [0, 1, 2]], h0=1)


def test_inner_block_must_be_square():
    # 2 CN types but 3 inner columns
    with pytest.raises(NonSquareInnerError):
        validate_base_matrix([[1, 1, 1, 1], [1, 1, 1, 1]], h0=1)


def test_entry_cap_enforced_and_overridable():
    rows = [[4, 1, 0], [1, 1, 1]]
    with pytest.raises(EntryCapError):
        validate_base_matrix(rows, h0=1)
    b = validate_base_matrix(rows, h0=1, entry_cap=4)
    assert b.entries[0][0] == 4


def test_h0_bounds():
    with pytest.raises(BaseMatrixError):
        validate_base_matrix([[1, 1], [1, 1]], h0=0)
    with pytest.raises(BaseMatrixError):
        validate_base_matrix([[1, 1], [1, 1]], h0=2)


def test_ensemble_rates_toy():
    b = catalog.get("toy23")
    r_inner, r_mother = ensemble_rates(b)
    assert r_inner == Fraction(1, 2)
    assert r_mother == Fraction(1, 3)
    assert b.rate_inner == Fraction(1, 2)


def test_ensemble_rates_catalog():
    expected = {
        "r12": (Fraction(1, 2), Fraction(1, 3)),
        "r23a": (Fraction(2, 3), Fraction(2, 5)),
        "r23b": (Fraction(2, 3), Fraction(2, 5)),
        "ones2x3": (Fraction(1, 2), Fraction(1, 3)),
        "ones3x4": (Fraction(1, 3), Fraction(1, 4)),
    }
    for name, (ri, rm) in expected.items():
        assert ensemble_rates(catalog.get(name)) == (ri, rm), name


def test_json_roundtrip(tmp_path):
    b = catalog.get("r23a")
    path = tmp_path / "base.json"
    save_base_matrix(b, path)
    b2 = load_base_matrix(path)
    assert b2 == b


def test_from_dict_missing_key():
    with pytest.raises(BaseMatrixError):
        base_matrix_from_dict({"rows": [[1, 1]]})
    with pytest.raises(BaseMatrixError):
        base_matrix_from_dict({"h0": 1})


def test_protograph_degrees_match_base_sums():
    b = catalog.get("toy23")
    p = Protograph.from_base(b)
    assert p.n_edges == sum(sum(row) for row in b.entries)
    for i in range(p.n0):
        assert p.cn_degree(i) == sum(b.entries[i])
    for j in range(p.h0 + p.n0):
        assert p.vn_degree(j) == sum(row[j] for row in b.entries)


def test_catalog_names_sorted_and_stable():
    names = catalog.names()
    assert names == sorted(names)
    assert {"toy23", "r12", "r23a", "r23b"} <= set(names)
    # repeated lookups return equal objects
    assert catalog.get("r12") == catalog.get("r12")
