"""Eulerian-type enumerators, quasi-Stirling generating functions and gamma tables."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .algebra import SparsePolynomial, TruncatedSeries, series_from_poly
from .core import (MultisetSpec, check_guard, cyclic_stats, enumerate_quasi_stirling,
                   enumerate_stirling, sibling_stats, word_stats)
from .partitions import _weak_compositions, gamma_counts

T = ("t",)
XY = ("x", "y")
XYZ = ("x", "y", "z")


def _counter_poly(vars, counts: Counter) -> SparsePolynomial:
    return SparsePolynomial(vars, dict(counts))


# -- Eulerian family ------------------------------------------------------------


def eulerian_t(n: int, max_M: Optional[int] = None) -> SparsePolynomial:
    """Descent polynomial of S_n with the final descent counted."""
    if n < 0:
        raise ValueError("n must be >= 0")
    check_guard(n, max_M)
    return _counter_poly(T, Counter((word_stats(p).des,)
                                    for p in itertools.permutations(range(1, n + 1))))


def eulerian_numbers(n: int) -> list[int]:
    """Row n of A(n, i), i = 0..n, from A(n,i) = i A(n-1,i) + (n-i+1) A(n-1,i-1)."""
    row = [1]
    for size in range(1, n + 1):
        prev = row + [0]
        row = [0] * (size + 1)
        for i in range(1, size + 1):
            row[i] = i * prev[i] + (size - i + 1) * prev[i - 1]
    return row


def eulerian_t_recurrence(n: int) -> SparsePolynomial:
    return SparsePolynomial(T, {(i,): c for i, c in enumerate(eulerian_numbers(n))})


@lru_cache(maxsize=None)
def _eulerian_xy(n: int) -> SparsePolynomial:
    return _counter_poly(XY, Counter(word_stats(p)[:2]
                                     for p in itertools.permutations(range(1, n + 1))))


def eulerian_xy(n: int, max_M: Optional[int] = None) -> SparsePolynomial:
    """Sum over S_n of x^des y^asc."""
    if n < 0:
        raise ValueError("n must be >= 0")
    check_guard(n, max_M)
    return _eulerian_xy(n)


def cyclic_eulerian_xy(n: int, max_M: Optional[int] = None) -> SparsePolynomial:
    """Sum over S_n of x^cdes y^casc."""
    if n < 1:
        raise ValueError("n must be >= 1")
    check_guard(n, max_M)
    return _counter_poly(XY, Counter(cyclic_stats(p)
                                     for p in itertools.permutations(range(1, n + 1))))


def eulerian_egf_series(order: int) -> TruncatedSeries:
    """(1 - t) / (1 - t e^{(1-t)u}) as a series in u with polynomial coefficients in t."""
    one = SparsePolynomial.const(1, T)
    t = SparsePolynomial.var("t", T)
    a = one - t
    expo = TruncatedSeries([a ** j * _inv_factorial(j) for j in range(order + 1)], order)
    denom = TruncatedSeries([one], order) - expo * t
    return TruncatedSeries([a], order) / denom


def _inv_factorial(j: int) -> Fraction:
    return Fraction(1, math.factorial(j))


def egf_coefficient(series: TruncatedSeries, n: int):
    """n! [u^n] of a series."""
    return series[n] * math.factorial(n)


# -- Stirling ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def stirling2(a: int, b: int) -> int:
    """Stirling numbers of the second kind."""
    if a < 0 or b < 0:
        raise ValueError("arguments must be >= 0")
    if a == 0 or b == 0:
        return 1 if a == b else 0
    return b * stirling2(a - 1, b) + stirling2(a - 1, b - 1)


def stirling_poly(n: int, max_M: Optional[int] = None) -> SparsePolynomial:
    """Descent polynomial of the 212-avoiding permutations of {1^2, ..., n^2}."""
    return _counter_poly(T, Counter((word_stats(w).des,) for w in enumerate_stirling(n, max_M)))


# -- quasi-Stirling -----------------------------------------------------------------


def qstirling_poly(m: MultisetSpec, max_M: Optional[int] = None) -> SparsePolynomial:
    """Sum of x^des y^asc z^plat over quasi-Stirling permutations of m."""
    return _counter_poly(XYZ, Counter(tuple(word_stats(w))
                                      for w in enumerate_quasi_stirling(m, max_M)))


def qstirling_t(m: MultisetSpec, max_M: Optional[int] = None) -> SparsePolynomial:
    """Descent polynomial of quasi-Stirling permutations of m, in t."""
    p = qstirling_poly(m, max_M).evaluate({"y": 1, "z": 1})
    return SparsePolynomial(T, p.terms)


def rhs_multiset_eulerian(m: MultisetSpec, max_M: Optional[int] = None) -> SparsePolynomial:
    """Multinomial sum over block sizes a with |a| = n of z^#empty * prod A_{a_i}(x, y)."""
    check_guard(m.M, max_M)
    n, k = m.n, m.k
    z = SparsePolynomial.var("z", XYZ)
    total = SparsePolynomial(XYZ)
    for a in _weak_compositions(n, k):
        coef = math.factorial(n)
        term = SparsePolynomial.const(1, XYZ)
        for part in a:
            coef //= math.factorial(part)
            if part == 0:
                term = term * z
            else:
                term = term * _eulerian_xy(part).with_vars(XYZ)
        total = total + term * coef
    return total


def egf_power_side(m: MultisetSpec, max_M: Optional[int] = None) -> SparsePolynomial:
    """n! [u^n] (A(x,y,u) - 1 + z)^k by truncated series arithmetic."""
    check_guard(m.M, max_M)
    n, k = m.n, m.k
    coeffs = [SparsePolynomial.var("z", XYZ)]
    for j in range(1, n + 1):
        coeffs.append(_eulerian_xy(j).with_vars(XYZ) * _inv_factorial(j))
    base = TruncatedSeries(coeffs, n)
    return egf_coefficient(base ** k, n)


def series_over_one_minus_t(p: SparsePolynomial, power: int, order: int) -> list:
    """Coefficients of t^0..t^order in p(t) / (1 - t)^power."""
    s = series_from_poly(p, "t", order) * TruncatedSeries([1, -1], order) ** (-power)
    return list(s.coeffs)


def multiset_carlitz_lhs(m: MultisetSpec, order: int) -> list[int]:
    return [math.comb(m.M - m.n + j, j) * j ** m.n for j in range(order + 1)]


def multiset_carlitz_rhs(m: MultisetSpec, order: int, max_M: Optional[int] = None) -> list:
    return series_over_one_minus_t(qstirling_t(m, max_M) * m.k, m.M + 1, order)


# -- gamma expansions -------------------------------------------------------------


@dataclass(frozen=True)
class GammaResult:
    degree: int
    gammas: tuple  # gamma_j for j = 0..degree // 2
    ok: bool
    failure: Optional[str] = None

    @property
    def positive(self) -> bool:
        return self.ok and all(g >= 0 for g in self.gammas)

    @property
    def negatives(self) -> list[tuple[int, int]]:
        return [(j, g) for j, g in enumerate(self.gammas) if g < 0]


def gamma_basis(j: int, d: int, vars: Sequence[str] = XY) -> SparsePolynomial:
    x = SparsePolynomial.var("x", vars)
    y = SparsePolynomial.var("y", vars)
    return (x * y) ** j * (x + y) ** (d - 2 * j)


def gamma_expand(gammas: Sequence[int], d: int, vars: Sequence[str] = XY) -> SparsePolynomial:
    total = SparsePolynomial(vars)
    for j, g in enumerate(gammas):
        if g:
            total = total + gamma_basis(j, d, vars) * g
    return total


def gamma_extract(f: SparsePolynomial, degree: Optional[int] = None) -> GammaResult:
    """Write f as sum_j gamma_j (xy)^j (x+y)^(d-2j), solving from j = 0 upward."""
    ix, iy = f.vars.index("x"), f.vars.index("y")
    others = [i for i in range(len(f.vars)) if i not in (ix, iy)]
    if any(e[i] for e in f.terms for i in others):
        raise ValueError("gamma_extract needs a polynomial in x and y only")
    d = f.homogeneous_degree(("x", "y"))
    if d is None:
        raise ValueError("gamma_extract needs a homogeneous polynomial")
    if f.is_zero():
        if degree is None:
            raise ValueError("degree required for the zero polynomial")
        d = degree
    elif degree is not None and degree != d:
        raise ValueError(f"polynomial has degree {d}, expected {degree}")
    g = SparsePolynomial(XY, {(e[ix], e[iy]): c for e, c in f.terms.items()})

    failure = None
    for a in range(d, -1, -1):
        if g.coefficient((a, d - a)) != g.coefficient((d - a, a)):
            failure = (f"asymmetric: coefficient of x^{a}y^{d - a} is {g.coefficient((a, d - a))}"
                       f" but x^{d - a}y^{a} has {g.coefficient((d - a, a))}")
            break

    rem = g
    gammas = []
    for j in range(d // 2 + 1):
        c = rem.coefficient((d - j, j))
        gammas.append(c)
        if c:
            rem = rem - gamma_basis(j, d) * c
    if failure is None and not rem.is_zero():
        e, c = max(rem.terms.items())
        failure = f"nonzero remainder: coefficient {c} at x^{e[0]}y^{e[1]}"
    return GammaResult(d, tuple(gammas), failure is None, failure)


def sd_gamma_counts(m: MultisetSpec, max_M: Optional[int] = None) -> Counter:
    """(plat, sd) -> number of quasi-Stirling permutations with that pair and dsd = 0."""
    out: Counter = Counter()
    for w in enumerate_quasi_stirling(m, max_M):
        s = sibling_stats(w)
        if s.dsd == 0:
            out[(word_stats(w).plat, s.sd)] += 1
    return out


@dataclass
class PartialGammaTable:
    multiset: MultisetSpec
    slices: dict = field(default_factory=dict)     # i -> GammaResult
    by_slice: dict = field(default_factory=dict)   # (i, j) -> gamma
    by_words: dict = field(default_factory=dict)   # (i, j) -> count
    by_partitions: dict = field(default_factory=dict)  # (i, j) -> Gamma / k
    mismatches: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches and all(r.ok for r in self.slices.values())

    @property
    def nonnegative(self) -> bool:
        return all(v >= 0 for v in self.by_slice.values())

    def nonzero(self) -> dict:
        return {key: v for key, v in sorted(self.by_slice.items()) if v}

    def rows(self) -> list[tuple[int, int, int]]:
        return [(i, j, v) for (i, j), v in sorted(self.by_slice.items()) if v]


def partial_gamma(m: MultisetSpec, max_M: Optional[int] = None) -> PartialGammaTable:
    """Partial gamma table of Q_M(x,y,z), computed three independent ways."""
    check_guard(m.M, max_M)
    M, n, k = m.M, m.n, m.k
    table = PartialGammaTable(m)
    q = qstirling_poly(m, max_M)
    for i in range(M - n + 1):
        res = gamma_extract(q.slice("z", i), degree=M + 1 - i)
        table.slices[i] = res
        if not res.ok:
            table.mismatches.append(("slice", i, res.failure))
        for j, g in enumerate(res.gammas):
            table.by_slice[(i, j)] = g

    for w in enumerate_quasi_stirling(m, max_M):
        s = sibling_stats(w)
        if s.dsd == 0:
            key = (word_stats(w).plat, s.sd)
            table.by_words[key] = table.by_words.get(key, 0) + 1
            table.witnesses.setdefault(key, w)

    for key, c in gamma_counts(n, k, max_M).items():
        if c % k:
            table.mismatches.append(("partition-divisibility", key, c))
        table.by_partitions[key] = c // k

    keys = set(table.by_slice) | set(table.by_words) | set(table.by_partitions)
    for key in sorted(keys):
        a = table.by_slice.get(key, 0)
        b = table.by_words.get(key, 0)
        c = table.by_partitions.get(key, 0)
        if not a == b == c:
            table.mismatches.append(("disagree", key, {"slice": a, "words": b, "partitions": c,
                                                       "witness": table.witnesses.get(key)}))
    return table
