"""Exact sparse polynomials and truncated power series.

Coefficients are Python ints or ``fractions.Fraction``; nothing is ever
rounded.  Series coefficients may themselves be :class:`SparsePolynomial`.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

Number = Union[int, Fraction]


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class SparsePolynomial:
    """Polynomial over the named variables, stored as {exponent tuple: coefficient}."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple, Number] | None = None):
        self.vars = tuple(vars)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != len(self.vars) or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for variables {self.vars}")
            if c != 0:
                clean[exp] = _norm(c)
        self.terms = clean

    @classmethod
    def const(cls, c: Number, vars: Sequence[str]) -> "SparsePolynomial":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, name: str, vars: Sequence[str]) -> "SparsePolynomial":
        vars = tuple(vars)
        exp = tuple(1 if v == name else 0 for v in vars)
        if name not in vars:
            raise ValueError(f"{name} not among {vars}")
        return cls(vars, {exp: 1})

    @classmethod
    def monomial(cls, vars: Sequence[str], exp: Sequence[int], c: Number = 1) -> "SparsePolynomial":
        return cls(vars, {tuple(exp): c})

    # -- arithmetic --

    def _coerce(self, other) -> "SparsePolynomial":
        if isinstance(other, SparsePolynomial):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")
            return other
        if isinstance(other, Rational):
            return SparsePolynomial.const(other, self.vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return SparsePolynomial(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePolynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            return SparsePolynomial(self.vars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePolynomial(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = SparsePolynomial.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return self * (Fraction(1) / other)
        return self.exact_div(other)

    def exact_div(self, other: "SparsePolynomial") -> "SparsePolynomial":
        """Exact quotient by a univariate-in-practice divisor; raises on remainder."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if other.is_constant():
            return self * (Fraction(1) / other.constant())
        live = [i for i in range(len(self.vars))
                if any(e[i] for e in other.terms)]
        if len(live) != 1:
            raise ValueError("exact_div supports divisors in a single variable")
        x = live[0]
        lead_deg = max(e[x] for e in other.terms)
        lead = {e: c for e, c in other.terms.items() if e[x] == lead_deg}
        if len(lead) != 1:
            raise ValueError("divisor must be univariate")
        (lead_exp, lead_c), = lead.items()
        rem = SparsePolynomial(self.vars, self.terms)
        quot: dict = {}
        while not rem.is_zero():
            e, c = max(rem.terms.items(), key=lambda kv: (kv[0][x], kv[0]))
            if e[x] < lead_deg:
                raise ValueError("division leaves a remainder")
            qe = tuple(a - b for a, b in zip(e, lead_exp))
            qc = Fraction(c) / lead_c
            quot[qe] = quot.get(qe, 0) + qc
            rem = rem - SparsePolynomial(self.vars, {qe: qc}) * other
        return SparsePolynomial(self.vars, quot)

    def __eq__(self, other):
        if isinstance(other, SparsePolynomial):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, Rational):
            return self.terms == ({(0,) * len(self.vars): other} if other != 0 else {})
        return NotImplemented

    __hash__ = None

    # -- inspection --

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant(self) -> Number:
        return self.terms.get((0,) * len(self.vars), 0)

    def coefficient(self, exp: Sequence[int]) -> Number:
        return self.terms.get(tuple(exp), 0)

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def homogeneous_degree(self, vars: Iterable[str] | None = None):
        """Common total degree in ``vars`` (all by default); None if not homogeneous."""
        idx = [self.vars.index(v) for v in (vars or self.vars)]
        degs = {sum(e[i] for i in idx) for e in self.terms}
        if len(degs) > 1:
            return None
        return degs.pop() if degs else 0

    def slice(self, var: str, power: int) -> "SparsePolynomial":
        """Coefficient of var**power, still written over all variables."""
        i = self.vars.index(var)
        return SparsePolynomial(self.vars, {e[:i] + (0,) + e[i + 1:]: c
                                            for e, c in self.terms.items() if e[i] == power})

    def drop_var(self, var: str) -> "SparsePolynomial":
        """Forget a variable that does not occur."""
        i = self.vars.index(var)
        if any(e[i] for e in self.terms):
            raise ValueError(f"{var} occurs in the polynomial")
        return SparsePolynomial(self.vars[:i] + self.vars[i + 1:],
                                {e[:i] + e[i + 1:]: c for e, c in self.terms.items()})

    def with_vars(self, vars: Sequence[str]) -> "SparsePolynomial":
        """Rewrite over a superset of the current variables."""
        vars = tuple(vars)
        missing = set(self.vars) - set(vars)
        if missing:
            raise ValueError(f"cannot drop {missing}")
        pos = [self.vars.index(v) if v in self.vars else None for v in vars]
        return SparsePolynomial(vars, {tuple(e[p] if p is not None else 0 for p in pos): c
                                       for e, c in self.terms.items()})

    def evaluate(self, values: Mapping[str, Number]):
        """Substitute numbers for some variables; returns a number if none remain."""
        keep = [v for v in self.vars if v not in values]
        out: dict = {}
        for e, c in self.terms.items():
            val = c
            rest = []
            for v, k in zip(self.vars, e):
                if v in values:
                    val = val * values[v] ** k
                else:
                    rest.append(k)
            out[tuple(rest)] = out.get(tuple(rest), 0) + val
        poly = SparsePolynomial(keep, out)
        return poly.constant() if not keep else poly

    def sorted_terms(self) -> list[tuple[tuple, Number]]:
        return sorted(self.terms.items())

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, exp) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _div_coeff(a, b):
    if isinstance(b, SparsePolynomial):
        if isinstance(a, SparsePolynomial):
            return a.exact_div(b)
        if a == 0:
            return 0
        return SparsePolynomial.const(a, b.vars).exact_div(b)
    return a * (Fraction(1) / b)


class TruncatedSeries:
    """Power series a_0 + a_1 u + ... known modulo u^(order + 1)."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence, order: int):
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = list(coeffs)[: order + 1]
        cs += [0] * (order + 1 - len(cs))
        self.coeffs = cs
        self.order = order

    @classmethod
    def from_function(cls, f, order: int) -> "TruncatedSeries":
        return cls([f(i) for i in range(order + 1)], order)

    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([other], self.order)
        if other.order != self.order:
            raise ValueError(f"truncation order mismatch: {self.order} vs {other.order}")
        return other

    def __getitem__(self, i: int):
        if not 0 <= i <= self.order:
            raise IndexError(f"coefficient {i} outside order {self.order}")
        return self.coeffs[i]

    def __add__(self, other):
        other = self._check(other)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([a * other for a in self.coeffs], self.order)
        other = self._check(other)
        N = self.order
        out = [0] * (N + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(N + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] = a * b + out[i + j]
        return TruncatedSeries(out, N)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = TruncatedSeries([1], self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([_div_coeff(a, other) for a in self.coeffs], self.order)
        other = self._check(other)
        b0 = other.coeffs[0]
        if b0 == 0:
            raise ZeroDivisionError("divisor has zero constant term")
        q = []
        for n in range(self.order + 1):
            acc = self.coeffs[n]
            for i in range(1, n + 1):
                if other.coeffs[i] != 0 and q[n - i] != 0:
                    acc = acc - other.coeffs[i] * q[n - i]
            q.append(_div_coeff(acc, b0))
        return TruncatedSeries(q, self.order)

    def inverse(self) -> "TruncatedSeries":
        return TruncatedSeries([1], self.order) / self

    def exp(self) -> "TruncatedSeries":
        """exp of a series with zero constant term."""
        if self.coeffs[0] != 0:
            raise ValueError("exp needs a zero constant term")
        e = [1]
        for n in range(1, self.order + 1):
            acc = 0
            for k in range(1, n + 1):
                if self.coeffs[k] != 0:
                    acc = acc + k * self.coeffs[k] * e[n - k]
            e.append(_div_coeff(acc, n))
        return TruncatedSeries(e, self.order)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.coeffs!r}, order={self.order})"


def series_from_poly(p: SparsePolynomial, var: str, order: int) -> TruncatedSeries:
    """A univariate polynomial in ``var`` as a truncated series of numbers."""
    if p.vars != (var,):
        p = p.with_vars((var,)) if set(p.vars) <= {var} else None
        if p is None:
            raise ValueError("polynomial must be univariate")
    coeffs = [0] * (order + 1)
    for (e,), c in p.terms.items():
        if e <= order:
            coeffs[e] = c
    return TruncatedSeries(coeffs, order)
