"""Exact model of the rank-one lattice vertex algebra and its dual-lattice modules.

The lattice is ``Z*alpha`` with ``<alpha, alpha> = 2p``.  A basis monomial
is a pair ``(parts, m)`` standing for

    alpha(-parts[0]) ... alpha(-parts[-1]) e^{m alpha / 2p}

with ``parts`` a weakly decreasing tuple of positive integers.  Charges are
kept as integer numerators over the fixed denominator ``2p``; ``m`` is a
multiple of ``2p`` exactly on ``V_L``.

Vertex operators of exponentials are expanded with the usual free-field
formula

    Y(e^b, x) = E^-(x) E^+(x) e^b x^{b(0)}.

On the Heisenberg part, identified with ``Q[y_1, y_2, ...]`` via
``y_k = alpha(-k)``, ``E^+`` acts as the shift ``y_k -> y_k - b x^{-k}``
and ``E^-`` multiplies by ``exp(sum_k (b/2p) y_k x^k / k)``.  The cocycle
is trivial.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Mapping

from .exactmath import gen_binom, to_fraction
from .linalg import integer_rows, rank_exact, nullspace_exact

__all__ = [
    "FockVector",
    "Lattice",
    "IncompatibleModeIndex",
    "partitions",
    "merge_parts",
]

Key = tuple  # (parts: tuple[int, ...], charge_num: int)


class IncompatibleModeIndex(ValueError):
    """Raised when a mode index does not match the fractional x-power of a term."""


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple[tuple[int, ...], ...]:
    """All partitions of ``n`` as weakly decreasing tuples."""
    if n < 0:
        return ()
    if n == 0:
        return ((),)
    out = []

    def rec(rem, maxpart, acc):
        if rem == 0:
            out.append(tuple(acc))
            return
        for k in range(min(rem, maxpart), 0, -1):
            acc.append(k)
            rec(rem - k, k, acc)
            acc.pop()

    rec(n, n, [])
    return tuple(out)


def merge_parts(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, reverse=True))


@lru_cache(maxsize=None)
def _exp_series_coeff(c: Fraction, degree: int) -> tuple:
    """Coefficient of ``x^degree`` in ``exp(sum_k c y_k x^k / k)``.

    Returned as ``((parts, coeff), ...)``.
    """
    out = []
    for lam in partitions(degree):
        mult = Counter(lam)
        coeff = Fraction(1)
        for k, mk in mult.items():
            coeff *= (c / k) ** mk / math.factorial(mk)
        out.append((lam, coeff))
    return tuple(out)


@lru_cache(maxsize=None)
def _submultisets(parts: tuple) -> tuple:
    """``(removed_sum, removed_count, remaining_parts, multiplicity)`` for each sub-multiset."""
    mult = sorted(Counter(parts).items(), reverse=True)
    out = []
    for choice in product(*(range(mk + 1) for _, mk in mult)):
        removed_sum = 0
        removed_cnt = 0
        ways = 1
        rest = []
        for (k, mk), s in zip(mult, choice):
            removed_sum += k * s
            removed_cnt += s
            ways *= math.comb(mk, s)
            rest.extend([k] * (mk - s))
        out.append((removed_sum, removed_cnt, tuple(rest), ways))
    return tuple(out)


class FockVector:
    """Finite rational combination of basis monomials ``(parts, charge_num)``.

    Immutable; arithmetic returns new vectors.  Zero coefficients are never
    stored.
    """

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping | Iterable = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (parts, m), c in items:
            key = (tuple(sorted(parts, reverse=True)), int(m))
            acc[key] = acc.get(key, Fraction(0)) + to_fraction(c)
        self._t = {k: v for k, v in acc.items() if v != 0}

    @classmethod
    def _raw(cls, d: dict) -> "FockVector":
        obj = object.__new__(cls)
        obj._t = {k: v for k, v in d.items() if v != 0}
        return obj

    @classmethod
    def monomial(cls, parts=(), m: int = 0, coeff=1) -> "FockVector":
        return cls({(tuple(parts), m): coeff})

    @classmethod
    def zero(cls) -> "FockVector":
        return cls._raw({})

    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def keys(self):
        return self._t.keys()

    def coefficient(self, parts=(), m: int = 0) -> Fraction:
        return self._t.get((tuple(parts), m), Fraction(0))

    def charges(self) -> set:
        return {m for _, m in self._t}

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    def __iter__(self):
        return iter(self._t.items())

    def __add__(self, other: "FockVector") -> "FockVector":
        if not isinstance(other, FockVector):
            return NotImplemented
        out = dict(self._t)
        for k, v in other._t.items():
            out[k] = out.get(k, Fraction(0)) + v
        return FockVector._raw(out)

    def __neg__(self):
        return FockVector._raw({k: -v for k, v in self._t.items()})

    def __sub__(self, other: "FockVector") -> "FockVector":
        if not isinstance(other, FockVector):
            return NotImplemented
        out = dict(self._t)
        for k, v in other._t.items():
            out[k] = out.get(k, Fraction(0)) - v
        return FockVector._raw(out)

    def __mul__(self, s) -> "FockVector":
        try:
            s = to_fraction(s)
        except TypeError:
            return NotImplemented
        if s == 0:
            return FockVector._raw({})
        return FockVector._raw({k: v * s for k, v in self._t.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, FockVector):
            return self._t == other._t
        if other == 0:
            return not self._t
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def proportionality(self, other: "FockVector") -> Fraction | None:
        """The scalar ``s`` with ``self == s * other``, or None if there is none."""
        if other.is_zero():
            return Fraction(0) if self.is_zero() else None
        k0, v0 = next(iter(other._t.items()))
        s = self._t.get(k0, Fraction(0)) / v0
        return s if self == other * s else None

    def sorted_terms(self) -> list:
        return sorted(self._t.items(), key=lambda kv: (kv[0][1], -sum(kv[0][0]), kv[0][0]))

    def to_str(self) -> str:
        if not self._t:
            return "0"
        chunks = []
        for (parts, m), c in self.sorted_terms():
            mono = "".join(f"a(-{k})" for k in parts) + f"e({m})"
            chunks.append(f"({c})*{mono}")
        return " + ".join(chunks)

    def __repr__(self):
        return f"FockVector[{self.to_str()}]"


def _ceil_div2(n: int) -> int:
    return -((-n) // 2)


class Lattice:
    """Mode algebra of ``V_{L°}`` for the lattice ``Z alpha``, ``<alpha,alpha> = 2p``.

    Every operation is exact and pure; results of ``exp_mode`` on basis
    monomials are memoised on the instance.
    """

    def __init__(self, p: int):
        if int(p) != p or p < 2:
            raise ValueError(f"p must be an integer >= 2 (got {p!r})")
        self.p = int(p)
        self.twop = 2 * self.p
        self.central_charge = 1 - Fraction(6 * (self.p - 1) ** 2, self.p)
        self._exp_cache: dict = {}

    def __repr__(self):
        return f"Lattice(p={self.p})"

    # ----------------------------------------------------------- grading
    def charge_degree(self, m: int) -> Fraction:
        """Conformal weight of ``e^{m alpha/2p}``: ``m(m - 2p + 2)/(4p)``."""
        return Fraction(m * (m - self.twop + 2), 2 * self.twop)

    def degree(self, key: Key) -> Fraction:
        parts, m = key
        return sum(parts) + self.charge_degree(m)

    def degrees(self, v: FockVector) -> set:
        return {self.degree(k) for k in v.keys()}

    def is_homogeneous(self, v: FockVector) -> bool:
        return len(self.degrees(v)) <= 1

    def charges_in_class(self, j: int, d) -> list[int]:
        """Charges ``m = j mod 2p`` with ``deg(e^m) <= d``."""
        d = to_fraction(d)
        p1 = self.p - 1
        # m(m - 2p + 2) <= 4pd  <=>  (m - (p-1))^2 <= (p-1)^2 + 4pd
        bound = p1 * p1 + 2 * self.twop * d
        if bound < 0:
            return []
        r = math.isqrt(math.floor(bound)) + 1
        lo, hi = p1 - r, p1 + r
        start = lo + ((j - lo) % self.twop)
        return [m for m in range(start, hi + 1, self.twop) if self.charge_degree(m) <= d]

    def graded_basis(self, j: int, d) -> list[Key]:
        """Basis monomials of degree ``d`` in ``V_{L + j alpha/2p}``."""
        d = to_fraction(d)
        out = []
        for m in self.charges_in_class(j, d):
            rest = d - self.charge_degree(m)
            if rest.denominator != 1 or rest < 0:
                continue
            out.extend((lam, m) for lam in partitions(int(rest)))
        return out

    def graded_dim(self, j: int, d) -> int:
        return len(self.graded_basis(j, d))

    # ---------------------------------------------------- basic vectors
    def vacuum(self) -> FockVector:
        return FockVector.monomial((), 0)

    def exp_vector(self, m: int) -> FockVector:
        """``e^{m alpha / 2p}``."""
        return FockVector.monomial((), m)

    def gamma(self, i: int) -> FockVector:
        """``e^{gamma_i}`` with ``gamma_i = i alpha / 2p``."""
        return self.exp_vector(i)

    def omega(self) -> FockVector:
        p = self.p
        return FockVector({((1, 1), 0): Fraction(1, 4 * p), ((2,), 0): Fraction(p - 1, 2 * p)})

    def generator(self, name: str) -> FockVector:
        """One of ``F = e^{-alpha}``, ``H = Q F``, ``E = Q^2 F`` or ``omega``."""
        name = name.upper() if name.lower() != "omega" else "omega"
        if name == "omega":
            return self.omega()
        f = self.exp_vector(-self.twop)
        if name == "F":
            return f
        if name == "H":
            return self.Q(f)
        if name == "E":
            return self.Q(self.Q(f))
        raise ValueError(f"unknown generator {name!r}")

    # ------------------------------------------------ Heisenberg modes
    def heis_mode(self, n: int, v: FockVector) -> FockVector:
        """``alpha(n)`` with ``[alpha(m), alpha(n)] = 2p m delta_{m+n,0}``."""
        out: dict = {}
        if n < 0:
            for (parts, m), c in v.items():
                key = (merge_parts(parts, (-n,)), m)
                out[key] = out.get(key, Fraction(0)) + c
        elif n == 0:
            for (parts, m), c in v.items():
                if m:
                    out[(parts, m)] = c * m
        else:
            scale = self.twop * n
            for (parts, m), c in v.items():
                k = parts.count(n)
                if not k:
                    continue
                idx = parts.index(n)
                rest = parts[:idx] + parts[idx + 1:]
                key = (rest, m)
                out[key] = out.get(key, Fraction(0)) + c * k * scale
        return FockVector._raw(out)

    # ----------------------------------------------- exponential modes
    def _exp_mono(self, b: int, r: Fraction, parts: tuple, m: int) -> tuple:
        ck = (b, r, parts, m)
        hit = self._exp_cache.get(ck)
        if hit is not None:
            return hit
        shift = Fraction(b * m, self.twop)
        target = -r - 1 - shift
        if target.denominator != 1:
            raise IncompatibleModeIndex(
                f"mode {r} of e^({b}/{self.twop} alpha) on charge {m}/{self.twop}: "
                f"x-power {target} is not integral"
            )
        target = int(target)
        c = Fraction(b, self.twop)
        acc: dict = {}
        newm = m + b
        for rsum, rcnt, rest, ways in _submultisets(parts):
            deg = target + rsum
            if deg < 0:
                continue
            pref = ways * (-b) ** rcnt
            for lam, sc in _exp_series_coeff(c, deg):
                key = (merge_parts(rest, lam), newm)
                acc[key] = acc.get(key, Fraction(0)) + pref * sc
        res = tuple((k, v) for k, v in acc.items() if v != 0)
        self._exp_cache[ck] = res
        return res

    def exp_mode(self, b_num: int, r, v: FockVector) -> FockVector:
        """``e^{beta}_r v`` with ``beta = b_num alpha / 2p``."""
        r = to_fraction(r)
        out: dict = {}
        for (parts, m), cv in v.items():
            for key, c in self._exp_mono(b_num, r, parts, m):
                out[key] = out.get(key, Fraction(0)) + cv * c
        return FockVector._raw(out)

    def Q(self, v: FockVector) -> FockVector:
        """Screening ``e^{alpha}_0``."""
        return self.exp_mode(self.twop, 0, v)

    def Qt(self, v: FockVector) -> FockVector:
        """Screening ``e^{-alpha/p}_0``; defined on charges divisible by ``p``."""
        return self.exp_mode(-2, 0, v)

    # ------------------------------------------------- Virasoro modes
    def virasoro_mode(self, n: int, v: FockVector) -> FockVector:
        """``L(n) = (1/4p) sum_j :alpha(j)alpha(n-j): - ((p-1)/2p)(n+1) alpha(n)``."""
        p = self.p
        out = FockVector.zero()
        quad_scale = Fraction(1, 2 * self.twop)
        for key, c in v.items():
            mono = FockVector._raw({key: c})
            maxpart = key[0][0] if key[0] else 0
            acc = FockVector.zero()
            for bb in range(_ceil_div2(n), max(maxpart, 0) + 1):
                aa = n - bb
                w = self.heis_mode(aa, self.heis_mode(bb, mono))
                acc = acc + (w if aa == bb else w * 2)
            out = out + acc * quad_scale
        lin = Fraction(p - 1, self.twop) * (n + 1)
        if lin:
            out = out - self.heis_mode(n, v) * lin
        return out

    # ------------------------------------------------- triplet modes
    def triplet_mode(self, X: str, i: int, v: FockVector) -> FockVector:
        """Modes of ``F = e^{-alpha}``, ``H = QF`` and ``E = Q^2 F``.

        ``H_i = [Q, F_i]`` and ``E_i = [Q, H_i]`` by the derivation rule.
        """
        X = X.upper()
        F = lambda w: self.exp_mode(-self.twop, i, w)
        if X == "F":
            return F(v)
        if X == "H":
            return self.Q(F(v)) - F(self.Q(v))
        if X == "E":
            qv = self.Q(v)
            return self.Q(self.Q(F(v))) - self.Q(F(qv)) * 2 + F(self.Q(qv))
        raise ValueError(f"unknown triplet generator {X!r}")

    # ---------------------------------------- general state-field map
    def field_mode(self, u: FockVector, n, v: FockVector) -> FockVector:
        """``u_n v`` for arbitrary ``u`` via the normally ordered free-field product.

        ``Y(alpha(-l_1)...alpha(-l_k) e^b, x) = :d^(l_1-1)alpha(x) ... Y(e^b, x):``
        with all creation modes on the left and all modes ``alpha(n>=0)``
        on the right of ``e^b x^{b(0)}``.  Independent of the screening
        commutator route used by :meth:`triplet_mode`.
        """
        n = to_fraction(n)
        out: dict = {}
        for (uparts, b), cu in u.items():
            for (vparts, m), cv in v.items():
                for key, c in self._field_mono(uparts, b, n, vparts, m):
                    out[key] = out.get(key, Fraction(0)) + cu * cv * c
        return FockVector._raw(out)

    def _field_mono(self, uparts: tuple, b: int, n: Fraction, vparts: tuple, m: int) -> list:
        shift = Fraction(b * m, self.twop)
        total = -n - 1 - shift
        if total.denominator != 1:
            raise IncompatibleModeIndex(
                f"mode {n} of a charge-{b}/{self.twop} field on charge {m}/{self.twop}"
            )
        total = int(total)
        a = [l - 1 for l in uparts]
        k = len(a)
        cexp = Fraction(b, self.twop)
        results: dict = {}
        for mask in range(1 << k):
            ann = [a[j] for j in range(k) if mask >> j & 1]
            cre = [a[j] for j in range(k) if not mask >> j & 1]
            # annihilation parts, applied first: state list of (parts, coeff, xpow)
            states = [(vparts, Fraction(1), 0)]
            for aj in ann:
                nxt = []
                for parts, coeff, xp in states:
                    if m:
                        # zero mode: C(-1, aj) = (-1)^aj
                        nxt.append((parts, coeff * m * (-1) ** aj, xp - 1 - aj))
                    for mode in sorted(set(parts)):
                        cnt = parts.count(mode)
                        idx = parts.index(mode)
                        rest = parts[:idx] + parts[idx + 1:]
                        w = gen_binom(-mode - 1, aj) * cnt * self.twop * mode
                        nxt.append((rest, coeff * w, xp - mode - 1 - aj))
                states = nxt
            for parts, coeff, xp in states:
                if coeff == 0:
                    continue
                for rsum, rcnt, rest, ways in _submultisets(parts):
                    budget = total - xp + rsum
                    if budget < 0:
                        continue
                    pref = coeff * ways * (-b) ** rcnt
                    # split budget among creation factors and E^-
                    for split in _compositions(budget, len(cre)):
                        dexp = budget - sum(split)
                        if dexp < 0:
                            continue
                        cpref = pref
                        new_parts = rest
                        for aj, ej in zip(cre, split):
                            cpref *= math.comb(ej + aj, aj)
                            new_parts = merge_parts(new_parts, (ej + aj + 1,))
                        for lam, sc in _exp_series_coeff(cexp, dexp):
                            key = (merge_parts(new_parts, lam), m + b)
                            results[key] = results.get(key, Fraction(0)) + cpref * sc
        return [(k_, v_) for k_, v_ in results.items() if v_ != 0]

    # -------------------------------------------------- kernels, checks
    def qtilde_matrix(self, d) -> tuple[list[Key], list[Key], list[list[Fraction]]]:
        """Matrix of the screening ``e^{-alpha/p}_0`` on the degree-``d`` part of ``V_L``."""
        src = self.graded_basis(0, d)
        images = [self.Qt(FockVector._raw({k: Fraction(1)})) for k in src]
        tgt = sorted({k for im in images for k in im.keys()})
        index = {k: i for i, k in enumerate(tgt)}
        rows = [[Fraction(0)] * len(src) for _ in tgt]
        for j, im in enumerate(images):
            for k, c in im.items():
                rows[index[k]][j] = c
        return src, tgt, rows

    def kernel_dim_Qtilde(self, d, method: str = "exact") -> int:
        """Dimension of the kernel of ``e^{-alpha/p}_0`` on ``V_L`` at degree ``d``.

        ``method="exact"`` uses fraction-free elimination over Z;
        ``method="modular"`` uses the accelerated rank over a large prime.
        """
        src, tgt, rows = self.qtilde_matrix(d)
        if not src:
            return 0
        if not rows:
            return len(src)
        if method == "exact":
            rank = rank_exact(rows)
        elif method == "modular":
            from ._accel import rank_mod_prime

            rank = rank_mod_prime(integer_rows(rows))
        else:
            raise ValueError(f"unknown method {method!r}")
        return len(src) - rank

    def kernel_basis_Qtilde(self, d) -> list[FockVector]:
        src, tgt, rows = self.qtilde_matrix(d)
        if not src:
            return []
        basis = nullspace_exact(rows, len(src))
        return [FockVector._raw({k: c for k, c in zip(src, vec) if c}) for vec in basis]

    def check_singular(self, v: FockVector, h) -> bool:
        """True iff ``L(1)v = L(2)v = 0`` and ``L(0)v = h v`` (and ``v != 0``)."""
        h = to_fraction(h)
        if v.is_zero():
            return False
        if self.virasoro_mode(0, v) != v * h:
            return False
        return self.virasoro_mode(1, v).is_zero() and self.virasoro_mode(2, v).is_zero()

    def zhu_o(self, X: str, v: FockVector) -> FockVector:
        """Zero-mode action ``o(X) = X_{wt X - 1}`` on a top-level vector."""
        if X.lower() == "omega":
            return self.virasoro_mode(0, v)
        return self.triplet_mode(X, self.twop - 2, v)


def _compositions(total: int, parts: int) -> Iterator[tuple]:
    """Weak compositions of at most ``total`` into ``parts`` nonnegative pieces."""
    if parts == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
