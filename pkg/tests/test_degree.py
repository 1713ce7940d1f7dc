import pytest
from hypothesis import given, strategies as st

from kgk.degree import Degree, RankMismatch, as_degree, degree_compare

coords = st.lists(st.integers(0, 9), min_size=3, max_size=3).map(tuple)


def test_compare_incomparable():
    r = degree_compare(Degree.of(2, 1), Degree.of(1, 3))
    assert r == {"leq": False, "geq": False, "join": Degree.of(2, 3), "meet": Degree.of(1, 1)}


def test_zero_is_bottom():
    r = degree_compare(Degree.of(0, 0), Degree.of(5, 7))
    assert r["leq"] and not r["geq"]
    assert r["join"] == Degree.of(5, 7) and r["meet"] == Degree.of(0, 0)


def test_idempotent():
    m = Degree.of(3, 3)
    r = degree_compare(m, m)
    assert r["leq"] and r["geq"] and r["join"] == m and r["meet"] == m


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        degree_compare(Degree.of(1), Degree.of(1, 2))


def test_negative_coordinate_rejected():
    with pytest.raises(ValueError):
        Degree.of(1, -1)


def test_subtraction_needs_order():
    assert Degree.of(3, 2) - Degree.of(1, 2) == Degree.of(2, 0)
    with pytest.raises(ValueError):
        Degree.of(1, 0) - Degree.of(0, 1)


def test_colors_and_below():
    assert Degree.of(2, 1).colors() == [1, 1, 2]
    below = list(Degree.of(1, 1).below())
    assert below == [Degree.of(0, 0), Degree.of(0, 1), Degree.of(1, 0), Degree.of(1, 1)]


def test_as_degree_broadcasts_int():
    assert as_degree(2, 3) == Degree.of(2, 2, 2)


@given(coords, coords)
def test_lattice_laws(a, b):
    m, n = Degree(a), Degree(b)
    lo, hi = m.meet(n), m.join(n)
    assert lo <= m <= hi and lo <= n <= hi
    assert hi + lo == m + n
    assert (m | n) == hi and (m & n) == lo
