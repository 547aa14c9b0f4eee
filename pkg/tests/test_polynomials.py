import pytest
from hypothesis import given, settings, strategies as st

from qstirling.algebra import SparsePolynomial
from qstirling.core import MultisetSpec, multisets_up_to
from qstirling.polynomials import (XY, XYZ, cyclic_eulerian_xy, egf_coefficient, egf_power_side,
                                   eulerian_egf_series, eulerian_t, eulerian_t_recurrence,
                                   eulerian_xy, gamma_expand, gamma_extract, multiset_carlitz_lhs,
                                   multiset_carlitz_rhs, partial_gamma, qstirling_poly, qstirling_t,
                                   rhs_multiset_eulerian, series_over_one_minus_t, stirling2,
                                   stirling_poly)

x = SparsePolynomial.var("x", XY)
y = SparsePolynomial.var("y", XY)
t = SparsePolynomial.var("t", ("t",))
X, Y, Z = (SparsePolynomial.var(v, XYZ) for v in XYZ)


def test_eulerian_examples():
    assert eulerian_t(0) == SparsePolynomial.const(1, ("t",))
    assert eulerian_t(1) == t
    assert eulerian_t(2) == t + t * t
    for n in range(0, 8):
        assert eulerian_t(n) == eulerian_t_recurrence(n)


def test_bivariate_eulerian_examples():
    assert eulerian_xy(2) == x * y * y + x * x * y
    assert eulerian_xy(3) == x * y * (x + y) ** 2 + x * x * y * y * 2
    assert cyclic_eulerian_xy(2) == x * y * 2
    assert eulerian_xy(0) == SparsePolynomial.const(1, XY)
    for n in range(1, 7):
        assert eulerian_xy(n).homogeneous_degree() == n + 1
    assert cyclic_eulerian_xy(1) == SparsePolynomial.const(1, XY)
    for n in range(2, 7):
        assert cyclic_eulerian_xy(n).homogeneous_degree() == n
    with pytest.raises(ValueError):
        cyclic_eulerian_xy(0)


def test_stirling_examples():
    assert stirling_poly(1) == t
    assert stirling_poly(2) == t + t * t * 2
    assert stirling2(3, 2) == 3
    assert [stirling2(4, b) for b in range(5)] == [0, 1, 7, 6, 1]


def test_qstirling_examples():
    assert qstirling_poly(MultisetSpec((1,))) == X * Y
    assert qstirling_poly(MultisetSpec((2, 2))) == \
        X * Y * Y * Z * Z + X * X * Y * Z * Z + X * X * Y * Y * Z * 2
    assert rhs_multiset_eulerian(MultisetSpec((1,))) == X * Y
    assert rhs_multiset_eulerian(MultisetSpec((2, 2))) == \
        Z * Z * X * Y * (X + Y) * 3 + X * X * Y * Y * Z * 6


def test_qstirling_t_counts_words():
    m = MultisetSpec((2, 1, 2))
    assert qstirling_t(m).evaluate({"t": 1}) == qstirling_poly(m).evaluate({"x": 1, "y": 1, "z": 1})


def test_multiset_eulerian_three_ways():
    for m in multisets_up_to(6):
        q = qstirling_poly(m) * m.k
        assert q == rhs_multiset_eulerian(m) == egf_power_side(m), m


def test_multiset_carlitz_small():
    for mult in [(2, 2), (1, 2, 1), (3, 1)]:
        m = MultisetSpec(mult)
        assert multiset_carlitz_lhs(m, 8) == multiset_carlitz_rhs(m, 8)


def test_carlitz_and_egf_baselines():
    for n in range(0, 5):
        lhs = [j ** n for j in range(9)]
        assert series_over_one_minus_t(eulerian_t(n), n + 1, 8) == lhs
    s = eulerian_egf_series(5)
    for n in range(0, 6):
        assert egf_coefficient(s, n) == eulerian_t(n)


def test_stirling_series_baseline():
    for n in range(1, 4):
        lhs = [stirling2(j + n, j) for j in range(9)]
        assert series_over_one_minus_t(stirling_poly(n), 2 * n + 1, 8) == lhs


def test_slices_symmetric_and_homogeneous():
    for m in multisets_up_to(6):
        q = qstirling_poly(m)
        for i in range(m.k):
            s = q.slice("z", i)
            if s.is_zero():
                continue
            assert s.homogeneous_degree(("x", "y")) == m.M + 1 - i
            swapped = SparsePolynomial(XYZ, {(b, a, c): v for (a, b, c), v in s.terms.items()})
            assert swapped == s


# -- gamma -------------------------------------------------------------------------


def test_gamma_examples():
    r = gamma_extract(x * y * (x + y))
    assert r.ok and r.gammas == (0, 1)
    r = gamma_extract(eulerian_xy(3))
    assert r.gammas == (0, 1, 2) and r.positive
    r = gamma_extract(x * x + y * y)
    assert r.ok and r.gammas == (1, -2) and not r.positive and r.negatives == [(1, -2)]


def test_gamma_failures_are_reported():
    r = gamma_extract(x * x * y)
    assert not r.ok and "asymmetric" in r.failure
    with pytest.raises(ValueError):
        gamma_extract(x * x + y)


def test_partial_gamma_examples():
    tab = partial_gamma(MultisetSpec((2, 2)))
    assert tab.ok and tab.nonzero() == {(1, 2): 2, (2, 1): 1}
    tab = partial_gamma(MultisetSpec((3,)))
    assert tab.nonzero() == {(2, 1): 1}
    tab = partial_gamma(MultisetSpec((1, 1, 1)))
    assert tab.nonzero() == {(0, 1): 1, (0, 2): 2}


def test_partial_gamma_agrees_three_ways():
    for m in multisets_up_to(6):
        tab = partial_gamma(m)
        assert tab.ok and tab.nonnegative, (m, tab.mismatches)


@settings(max_examples=30)
@given(st.integers(1, 8), st.data())
def test_gamma_reexpansion(d, data):
    gammas = data.draw(st.lists(st.integers(-9, 9), min_size=d // 2 + 1, max_size=d // 2 + 1))
    f = gamma_expand(gammas, d)
    if f.is_zero():
        return
    r = gamma_extract(f, degree=d)
    assert r.ok and list(r.gammas) == gammas
    assert gamma_expand(r.gammas, d) == f


def test_gamma_reexpansion_on_eulerian():
    for n in range(1, 8):
        r = gamma_extract(eulerian_xy(n))
        assert r.positive
        assert gamma_expand(r.gammas, n + 1) == eulerian_xy(n)
