import itertools
import json
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellvec.bell import (
    BellMatrix,
    DeterministicStrategy,
    EnumerationTooLarge,
    MatrixFormatError,
    build_family,
    build_xn,
    build_yn,
    build_zn,
    classical_bound,
    classical_value,
    family_lhv_bound,
    load_matrix,
    save_matrix,
)


def brute_force_lhv(entries):
    """Independent oracle: maximise over every a and b sign vector."""
    m_a, m_b = entries.shape
    best = -np.inf
    for a in itertools.product((1, -1), repeat=m_a):
        for b in itertools.product((1, -1), repeat=m_b):
            best = max(best, float(np.array(a) @ entries @ np.array(b)))
    return best


def test_classical_value_chsh_all_plus():
    M = build_xn(2)
    assert classical_value(M, DeterministicStrategy((1, 1), (1, 1))) == 2


def test_classical_value_unit_signs_is_entry_sum():
    M = BellMatrix([[0.5, -2.0, 3.0], [1.25, 0.0, -0.75]])
    s = DeterministicStrategy((1, 1), (1, 1, 1))
    assert classical_value(M, s) == M.entries.sum()


def test_classical_value_z4_balanced_split():
    M = build_zn(4)
    b = (1, 1, -1, -1)
    a = tuple(1 if b[i] - b[j] >= 0 else -1 for i, j in itertools.combinations(range(4), 2))
    assert classical_value(M, DeterministicStrategy(a, b)) == 8


def test_classical_value_rejects_length_mismatch():
    with pytest.raises(ValueError):
        classical_value(build_zn(3), DeterministicStrategy((1,), (1, 1, 1)))


def test_strategy_rejects_non_sign():
    with pytest.raises(ValueError):
        DeterministicStrategy((1, 0), (1,))


@pytest.mark.parametrize(
    "M, expected",
    [(build_xn(4), 12.0), (build_zn(6), 18.0), (BellMatrix([[-3.5]]), 3.5), (build_xn(3), 6.0)],
)
def test_classical_bound_values(M, expected):
    value, s = classical_bound(M)
    assert value == expected
    assert classical_value(M, s) == expected


def test_classical_bound_guard():
    with pytest.raises(EnumerationTooLarge, match="enumeration too large"):
        classical_bound(BellMatrix(np.ones((1, 31))))


def test_classical_bound_at_guard_edge_small_rows():
    # m_b = 20 still enumerates (about a million patterns)
    M = BellMatrix(np.ones((1, 20)))
    assert classical_bound(M)[0] == 20


def test_classical_bound_tie_break_lowest_pattern():
    # every b gives |b1 + b2| in {0, 2}; b = (+1, +1) is pattern 0
    _, s = classical_bound(BellMatrix([[1.0, 1.0]]))
    assert s.b_signs == (1, 1)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda m_a: st.integers(1, 4).flatmap(
            lambda m_b: st.lists(
                st.lists(st.integers(-3, 3), min_size=m_b, max_size=m_b),
                min_size=m_a, max_size=m_a,
            )
        )
    )
)
def test_classical_bound_matches_brute_force(rows):
    M = BellMatrix(np.array(rows, dtype=float))
    assert classical_bound(M)[0] == brute_force_lhv(M.entries)


def test_build_xn_shapes_and_rows():
    M = build_xn(4)
    assert (M.m_a, M.m_b) == (8, 4)
    np.testing.assert_array_equal(build_xn(2).entries, [[1, 1], [-1, 1]])
    # row 5 = binary 101 -> k = (1, 0, 1)
    np.testing.assert_array_equal(M.entries[5], [-1, 1, -1, 1])


def test_build_yn():
    M = build_yn(4)
    assert (M.m_a, M.m_b) == (12, 4)
    np.testing.assert_array_equal(M.entries[:2], [[1, 1, 0, 0], [1, -1, 0, 0]])
    M2 = build_yn(2)
    assert M2.entries.shape == (2, 2)
    assert classical_bound(M2)[0] == 2


def test_build_zn():
    M = build_zn(4)
    assert (M.m_a, M.m_b) == (6, 4)
    assert classical_bound(M)[0] == 8
    assert build_zn(6).entries.shape == (15, 6)
    np.testing.assert_array_equal(build_zn(2).entries, [[1, -1]])
    assert classical_bound(build_zn(2))[0] == 2


@pytest.mark.parametrize("builder, bad", [(build_xn, 1), (build_xn, 21), (build_yn, 21), (build_zn, 65)])
def test_builders_reject_out_of_range(builder, bad):
    with pytest.raises(ValueError):
        builder(bad)


@pytest.mark.parametrize("family, n, expected", [("X", 4, 12), ("Z", 6, 18), ("Y", 2, 2), ("X", 3, 6)])
def test_family_lhv_bound(family, n, expected):
    assert family_lhv_bound(family, n) == expected


def test_family_lhv_x_matches_binomial_sum():
    # the sum runs over all 2^n sign patterns of b; the matrix pins the last
    # coefficient to +1 and so has half as many rows
    for n in range(2, 12):
        direct = sum(comb(n, i) * abs(n - 2 * i) for i in range(n + 1))
        assert family_lhv_bound("X", n) == direct / 2


@pytest.mark.parametrize("family", "XYZ")
@pytest.mark.parametrize("n", range(2, 9))
def test_enumeration_equals_closed_form(family, n):
    assert classical_bound(build_family(family, n))[0] == family_lhv_bound(family, n)


@pytest.mark.parametrize("n", range(2, 10))
def test_family_entry_properties(n):
    assert np.all(build_zn(n).entries.sum(axis=1) == 0)
    assert np.all(np.abs(build_xn(n).entries) == 1)


@pytest.mark.parametrize("M", [build_xn(3), build_yn(3), build_zn(4)], ids=["X3", "Y3", "Z4"])
def test_classical_value_never_exceeds_bound(M):
    rng = np.random.default_rng(7)
    bound = classical_bound(M)[0]
    for _ in range(1000):
        a = tuple(rng.choice((1, -1), M.m_a))
        b = tuple(rng.choice((1, -1), M.m_b))
        assert classical_value(M, DeterministicStrategy(a, b)) <= bound


@pytest.mark.parametrize("M", [build_xn(4), build_yn(3), build_zn(5)], ids=["X4", "Y3", "Z5"])
def test_classical_bound_symmetries(M):
    rng = np.random.default_rng(3)
    bound = classical_bound(M)[0]
    E = M.entries
    for _ in range(5):
        P = E[rng.permutation(M.m_a)][:, rng.permutation(M.m_b)]
        P = P * rng.choice((1, -1), M.m_a)[:, None] * rng.choice((1, -1), M.m_b)[None, :]
        assert classical_bound(BellMatrix(P))[0] == bound


def test_matrix_validation():
    with pytest.raises(ValueError):
        BellMatrix([[1.0, np.inf]])
    with pytest.raises(ValueError):
        BellMatrix(np.zeros((0, 2)))
    with pytest.raises(ValueError):
        BellMatrix([1.0, 2.0])
    M = build_zn(3)
    with pytest.raises(ValueError):
        M.entries[0, 0] = 5


def test_json_round_trip(tmp_path):
    M = BellMatrix([[0.1, 1 / 3], [-2.5e-17, 7.0]], label="custom")
    path = tmp_path / "m.json"
    save_matrix(M, path)
    data = json.loads(path.read_text())
    assert set(data) == {"m_a", "m_b", "entries", "label"}
    assert load_matrix(path) == M


def test_text_format(tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("2 3\n1 0 -1\n\n0.5 2 3\n")
    M = load_matrix(path)
    np.testing.assert_array_equal(M.entries, [[1, 0, -1], [0.5, 2, 3]])
    assert M.label is None


@pytest.mark.parametrize(
    "text, match",
    [
        ("2 2\n1 2\n3\n", "line 3: expected 2 values"),
        ("2 2\n1 2\n", "expected 2 rows"),
        ("2\n1 2\n", "line 1: header"),
        ("1 2\n1 x\n", "line 2"),
        ('{"m_a": 1, "m_b": 2, "entries": [[1]]}', "row 0"),
        ('{"m_a": 1, "entries": [[1]]}', "missing field 'm_b'"),
        ('{"m_a": 1,\n "m_b": }', "line 2"),
    ],
)
def test_parse_errors_are_diagnostic(tmp_path, text, match):
    path = tmp_path / "bad"
    path.write_text(text)
    with pytest.raises(MatrixFormatError, match=match):
        load_matrix(path)
