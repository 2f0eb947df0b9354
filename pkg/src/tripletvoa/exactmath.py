"""Exact scalar, polynomial and truncated q-series arithmetic.

Scalars are :class:`fractions.Fraction` throughout.  ``PolyQ`` is a dense
univariate polynomial over Q and ``PuiseuxSeries`` a truncated series in
``q`` with arbitrary rational exponents.  Both are immutable.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "PolyQ",
    "PuiseuxSeries",
    "DuplicateAbscissa",
    "DivisionByZeroPoly",
    "NonInvertibleSeries",
    "binom_poly",
    "gen_binom",
    "lagrange_interpolate",
    "poly_divrem",
    "poly_gcd",
    "series_mul",
    "series_inverse",
    "series_truncate",
    "to_fraction",
]


class DuplicateAbscissa(ValueError):
    pass


class DivisionByZeroPoly(ZeroDivisionError):
    pass


class NonInvertibleSeries(ZeroDivisionError):
    pass


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"a/b"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC, str)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def _strip(coeffs: list) -> tuple:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class PolyQ:
    """Dense polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        self._c = _strip([to_fraction(c) for c in coeffs])

    @classmethod
    def _raw(cls, coeffs: tuple) -> "PolyQ":
        obj = object.__new__(cls)
        obj._c = coeffs
        return obj

    @classmethod
    def x(cls) -> "PolyQ":
        return cls._raw((Fraction(0), Fraction(1)))

    @classmethod
    def const(cls, c) -> "PolyQ":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "PolyQ":
        out = cls.const(lead)
        for r in roots:
            out = out * cls([-to_fraction(r), 1])
        return out

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    @property
    def leading(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self._c):
            return self._c[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self._c)

    def _coerce(self, other) -> "PolyQ":
        if isinstance(other, PolyQ):
            return other
        return PolyQ.const(other)

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._c, o._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return PolyQ._raw(_strip(out))

    __radd__ = __add__

    def __neg__(self):
        return PolyQ._raw(tuple(-c for c in self._c))

    def __sub__(self, other):
        try:
            return self + (-self._coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PolyQ):
            a, b = self._c, other._c
            if not a or not b:
                return PolyQ._raw(())
            out = [Fraction(0)] * (len(a) + len(b) - 1)
            for i, ca in enumerate(a):
                if ca == 0:
                    continue
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
            return PolyQ._raw(_strip(out))
        try:
            s = to_fraction(other)
        except TypeError:
            return NotImplemented
        if s == 0:
            return PolyQ._raw(())
        return PolyQ._raw(tuple(c * s for c in self._c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = to_fraction(other)
        return PolyQ._raw(tuple(c / s for c in self._c))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = PolyQ.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divrem(self, other: "PolyQ") -> tuple["PolyQ", "PolyQ"]:
        return poly_divrem(self, other)

    def __floordiv__(self, other):
        return poly_divrem(self, self._coerce(other))[0]

    def __mod__(self, other):
        return poly_divrem(self, self._coerce(other))[1]

    def __call__(self, value):
        """Horner evaluation; ``value`` may be a number or a PolyQ (composition)."""
        if isinstance(value, PolyQ):
            acc = PolyQ._raw(())
        elif isinstance(value, (int, Fraction)):
            acc = Fraction(0)
        else:
            acc = 0
        for c in reversed(self._c):
            acc = acc * value + (c if not isinstance(value, (float, complex)) else float(c))
        return acc

    def derivative(self) -> "PolyQ":
        return PolyQ._raw(_strip([k * c for k, c in enumerate(self._c)][1:]))

    def monic(self) -> "PolyQ":
        if not self._c:
            return self
        return self / self._c[-1]

    def __eq__(self, other):
        if isinstance(other, PolyQ):
            return self._c == other._c
        try:
            return self._c == PolyQ.const(other)._c
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return f"PolyQ([{', '.join(str(c) for c in self._c)}])"

    def to_str(self, var: str = "x") -> str:
        if not self._c:
            return "0"
        parts = []
        for k in range(len(self._c) - 1, -1, -1):
            c = self._c[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.to_str()


def poly_divrem(a: PolyQ, b: PolyQ) -> tuple[PolyQ, PolyQ]:
    """Euclidean division ``a = q*b + r`` with ``deg r < deg b``."""
    if b.is_zero():
        raise DivisionByZeroPoly("division by the zero polynomial")
    rem = list(a.coeffs)
    db = b.degree
    if len(rem) - 1 < db:
        return PolyQ._raw(()), a
    lead = b.leading
    quo = [Fraction(0)] * (len(rem) - db)
    bc = b.coeffs
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db] / lead
        quo[k] = c
        if c:
            for j in range(db + 1):
                rem[k + j] -= c * bc[j]
    return PolyQ._raw(_strip(quo)), PolyQ._raw(_strip(rem[:db]))


def poly_gcd(a: PolyQ, b: PolyQ) -> PolyQ:
    """Monic gcd (the zero polynomial if both inputs vanish)."""
    while not b.is_zero():
        a, b = b, poly_divrem(a, b)[1]
    return a.monic()


def binom_poly(k: int) -> PolyQ:
    """The polynomial ``C(t, k) = t(t-1)...(t-k+1)/k!``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = PolyQ.const(1)
    for j in range(k):
        out = out * PolyQ([-j, 1])
    return out / factorial(k)


def gen_binom(a, k: int) -> Fraction:
    """Generalised binomial ``a(a-1)...(a-k+1)/k!`` for rational ``a``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = to_fraction(a)
    num = Fraction(1)
    for j in range(k):
        num *= a - j
    return num / factorial(k)


def lagrange_interpolate(points: Sequence[tuple]) -> PolyQ:
    """Unique polynomial of degree < n through n points with distinct abscissas."""
    if not points:
        raise ValueError("need at least one point")
    xs = [to_fraction(x) for x, _ in points]
    ys = [to_fraction(y) for _, y in points]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa("interpolation abscissas must be distinct")
    out = PolyQ()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        basis = PolyQ.const(1)
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * PolyQ([-xj, 1])
                denom *= xi - xj
        out = out + basis * (yi / denom)
    return out


class PuiseuxSeries:
    """Truncated series ``sum c_e q^e`` with rational exponents.

    All exponents strictly below ``order`` are exact; ``order=None`` means
    the series is an exact finite sum.
    """

    __slots__ = ("_terms", "_order")

    def __init__(self, terms: Mapping | Iterable = (), order=None):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        o = None if order is None else to_fraction(order)
        acc: dict[Fraction, Fraction] = {}
        for e, c in items:
            e = to_fraction(e)
            if o is not None and e >= o:
                continue
            acc[e] = acc.get(e, Fraction(0)) + to_fraction(c)
        self._terms = {e: c for e, c in sorted(acc.items()) if c != 0}
        self._order = o

    @classmethod
    def _raw(cls, terms: dict, order) -> "PuiseuxSeries":
        obj = object.__new__(cls)
        obj._terms = dict(sorted((e, c) for e, c in terms.items() if c != 0))
        obj._order = order
        return obj

    @classmethod
    def one(cls, order=None) -> "PuiseuxSeries":
        return cls({0: 1}, order)

    @classmethod
    def monomial(cls, exponent, coeff=1, order=None) -> "PuiseuxSeries":
        return cls({exponent: coeff}, order)

    @property
    def order(self):
        return self._order

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def exponents(self) -> list:
        return list(self._terms)

    def coefficient(self, e) -> Fraction:
        e = to_fraction(e)
        if self._order is not None and e >= self._order:
            raise ValueError(f"exponent {e} lies beyond truncation order {self._order}")
        return self._terms.get(e, Fraction(0))

    def valuation(self):
        """Smallest exponent with a nonzero coefficient (order if none known)."""
        if self._terms:
            return next(iter(self._terms))
        return self._order

    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return next(iter(self._terms.values()))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    @staticmethod
    def _min_order(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            try:
                other = PuiseuxSeries({0: to_fraction(other)})
            except TypeError:
                return NotImplemented
        order = self._min_order(self._order, other._order)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        if order is not None:
            out = {e: c for e, c in out.items() if e < order}
        return PuiseuxSeries._raw(out, order)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries._raw({e: -c for e, c in self._terms.items()}, self._order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PuiseuxSeries):
            return series_mul(self, other)
        try:
            s = to_fraction(other)
        except TypeError:
            return NotImplemented
        return PuiseuxSeries._raw({e: c * s for e, c in self._terms.items()}, self._order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PuiseuxSeries):
            return series_mul(self, series_inverse(other))
        s = to_fraction(other)
        return PuiseuxSeries._raw({e: c / s for e, c in self._terms.items()}, self._order)

    def shift(self, a) -> "PuiseuxSeries":
        """Multiply by ``q^a``."""
        a = to_fraction(a)
        order = None if self._order is None else self._order + a
        return PuiseuxSeries._raw({e + a: c for e, c in self._terms.items()}, order)

    def truncate(self, order) -> "PuiseuxSeries":
        return series_truncate(self, order)

    def inverse(self, order=None) -> "PuiseuxSeries":
        return series_inverse(self, order)

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self._terms == other._terms and self._order == other._order

    def agrees_with(self, other: "PuiseuxSeries") -> bool:
        """Coefficientwise equality below the smaller of the two orders."""
        order = self._min_order(self._order, other._order)
        a = self if order is None else self.truncate(order)
        b = other if order is None else other.truncate(order)
        return a._terms == b._terms

    def __repr__(self):
        body = " + ".join(f"{c}*q^({e})" for e, c in self._terms.items()) or "0"
        tail = "" if self._order is None else f" + O(q^({self._order}))"
        return f"PuiseuxSeries({body}{tail})"


def series_truncate(s: PuiseuxSeries, order) -> PuiseuxSeries:
    order = to_fraction(order)
    if s.order is not None and s.order < order:
        order = s.order
    return PuiseuxSeries._raw({e: c for e, c in s.items() if e < order}, order)


def series_mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    """Product, exact below ``min(v(a) + o(b), v(b) + o(a))``."""
    va, vb = a.valuation(), b.valuation()
    cands = []
    if b.order is not None and va is not None:
        cands.append(va + b.order)
    if a.order is not None and vb is not None:
        cands.append(vb + a.order)
    order = min(cands) if cands else None
    out: dict[Fraction, Fraction] = {}
    bitems = list(b.items())
    for ea, ca in a.items():
        for eb, cb in bitems:
            e = ea + eb
            if order is not None and e >= order:
                break
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return PuiseuxSeries._raw(out, order)


def series_inverse(s: PuiseuxSeries, order=None) -> PuiseuxSeries:
    """Multiplicative inverse of a series with nonzero leading coefficient.

    For a series with finitely many terms and no truncation the caller must
    supply the desired ``order`` of the result.
    """
    if s.is_zero():
        raise NonInvertibleSeries("the series has no nonzero coefficient")
    v = s.valuation()
    c = s.leading_coefficient()
    if s.order is not None:
        res_order = s.order - 2 * v
        if order is not None:
            res_order = min(res_order, to_fraction(order))
    elif len(s) == 1:
        return PuiseuxSeries._raw({-v: 1 / c}, None if order is None else to_fraction(order))
    elif order is None:
        raise ValueError("an explicit order is needed to invert an untruncated series")
    else:
        res_order = to_fraction(order)
    rel = res_order + v  # relative precision of the unit part
    unit = [(e - v, x / c) for e, x in s.items() if e != v]
    # exponent monoid generated by the unit part, below rel
    exps = {Fraction(0)}
    frontier = [Fraction(0)]
    while frontier:
        nxt = []
        for e in frontier:
            for f, _ in unit:
                g = e + f
                if g < rel and g not in exps:
                    exps.add(g)
                    nxt.append(g)
        frontier = nxt
    coeff: dict[Fraction, Fraction] = {}
    for e in sorted(exps):
        if e == 0:
            coeff[e] = Fraction(1)
            continue
        acc = Fraction(0)
        for f, u in unit:
            if f > e:
                break
            prev = coeff.get(e - f)
            if prev:
                acc -= u * prev
        coeff[e] = acc
    return PuiseuxSeries._raw({e - v: x / c for e, x in coeff.items()}, res_order)
