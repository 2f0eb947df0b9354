"""q-series characters: eta, theta constants, W(p)-irreducibles, lattice modules.

Series are exact ``PuiseuxSeries`` objects; ``order`` arguments are absolute
exponent bounds (every exponent below ``order`` is exact).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _accel
from .exactmath import PuiseuxSeries, to_fraction
from .report import VerifyReport
from .zhu import central_charge, weight_h

__all__ = [
    "SubscriptConventionMismatch",
    "InsufficientOrder",
    "IllConditioned",
    "LatticeCharacterMismatch",
    "CharacterSeries",
    "eta_series",
    "theta_series",
    "dtheta_series",
    "char_irreducible",
    "char_lattice_module",
    "char_lattice_counting",
    "numeric_eval",
    "tail_bound",
    "default_taus",
    "closure_basis",
    "s_closure_test",
    "ClosureResult",
    "congruence_table",
    "CongruenceTable",
]

DEFAULT_TERMS = 30


class SubscriptConventionMismatch(ArithmeticError):
    pass


class InsufficientOrder(ArithmeticError):
    pass


class IllConditioned(ArithmeticError):
    pass


class LatticeCharacterMismatch(ArithmeticError):
    pass


@dataclass
class CharacterSeries:
    label: str
    series: PuiseuxSeries
    leading_exponent: Fraction

    def coefficients(self) -> list[tuple[Fraction, Fraction]]:
        return list(self.series.items())

    def __add__(self, other: "CharacterSeries") -> "CharacterSeries":
        s = self.series + other.series
        return CharacterSeries(f"{self.label}+{other.label}", s, s.valuation())


# ------------------------------------------------------------ eta/theta
def _pentagonal_product(deg: int) -> list[int]:
    """Coefficients of prod_{n>=1} (1 - q^n) through q^deg."""
    c = [0] * (deg + 1)
    c[0] = 1
    for n in range(1, deg + 1):
        for k in range(deg, n - 1, -1):
            c[k] -= c[k - n]
    return c


def eta_series(order) -> PuiseuxSeries:
    """``q^{1/24} prod (1 - q^n)`` exact below ``order``."""
    order = to_fraction(order)
    if order <= Fraction(1, 24):
        raise ValueError("order must exceed 1/24")
    deg = int((order - Fraction(1, 24)) // 1)
    if Fraction(1, 24) + deg >= order:
        deg -= 1
    c = _pentagonal_product(max(deg, 0))
    return PuiseuxSeries({Fraction(1, 24) + k: v for k, v in enumerate(c)}, order)


def _theta_terms(j: int, p: int, order: Fraction, weighted: bool) -> dict:
    # exponents (2pn + j)^2 / 4p < order
    out: dict = {}
    bound = order * 4 * p
    n = 0
    # scan n upward and downward from the minimum
    center = -j // (2 * p)
    for direction in (1, -1):
        n = center if direction == 1 else center - 1
        while True:
            k = 2 * p * n + j
            e = Fraction(k * k, 4 * p)
            if k * k >= bound:
                # the quadratic grows monotonically away from the center
                if (direction == 1 and k >= 0) or (direction == -1 and k <= 0):
                    break
                n += direction
                continue
            out[e] = out.get(e, 0) + (k if weighted else 1)
            n += direction
    return out


def theta_series(j: int, p: int, order) -> PuiseuxSeries:
    """``sum_n q^{(2pn + j)^2 / 4p}``."""
    order = to_fraction(order)
    return PuiseuxSeries(_theta_terms(j, p, order, False), order)


def dtheta_series(j: int, p: int, order) -> PuiseuxSeries:
    """``sum_n (2pn + j) q^{(2pn + j)^2 / 4p}``."""
    order = to_fraction(order)
    return PuiseuxSeries(_theta_terms(j, p, order, True), order)


def _over_eta(num: PuiseuxSeries, order: Fraction) -> PuiseuxSeries:
    v = num.valuation()
    inv = eta_series(order - v + 1).inverse()
    return (num * inv).truncate(order)


# ------------------------------------------------------------ characters
def _leading(kind: str, i: int, p: int) -> Fraction:
    c = central_charge(p)
    idx = i if kind == "Lambda" else 3 * p - i
    return weight_h(idx, 1, p) - c / 24


def _norm_kind(kind: str) -> str:
    k = kind.strip().lower()
    if k in ("lambda", "l", "λ"):
        return "Lambda"
    if k in ("pi", "π"):
        return "Pi"
    raise ValueError(f"unknown module kind {kind!r}")


def _raw_irreducible(kind: str, i: int, p: int, order: Fraction) -> PuiseuxSeries:
    pad = order + 1
    if kind == "Lambda":
        num = theta_series(p - i, p, pad) * i + dtheta_series(p - i, p, pad)
    else:
        num = theta_series(i, p, pad) * i - dtheta_series(i, p, pad)
    return _over_eta(num, order) / p


def char_irreducible(kind: str, i: int, p: int, terms: int = DEFAULT_TERMS, check: bool = True) -> CharacterSeries:
    """Character of ``Lambda(i)`` or ``Pi(i)`` through ``terms`` integer degrees past the leading exponent.

    The theta subscripts are read index-first.  With ``check`` the result is
    compared against the top-space dimension and against brute-force
    counting in the lattice module that contains it.
    """
    kind = _norm_kind(kind)
    if p < 2 or not 1 <= i <= p:
        raise ValueError(f"need p >= 2 and 1 <= i <= p, got p={p}, i={i}")
    lead = _leading(kind, i, p)
    order = lead + terms
    s = _raw_irreducible(kind, i, p, order)
    out = CharacterSeries(f"{kind}{i}", s, lead)
    if check:
        _self_check(out, kind, i, p)
    return out


def _self_check(ch: CharacterSeries, kind: str, i: int, p: int) -> None:
    s = ch.series
    want_dim = 1 if kind == "Lambda" else 2
    if s.valuation() != ch.leading_exponent or s.leading_coefficient() != want_dim:
        raise SubscriptConventionMismatch(
            f"{ch.label}: leading term {s.leading_coefficient()} q^{s.valuation()}, "
            f"expected {want_dim} q^{ch.leading_exponent}"
        )
    if any(c.denominator != 1 or c < 0 for _, c in s.items()):
        raise SubscriptConventionMismatch(f"{ch.label}: coefficients are not nonnegative integers")
    # pair with the partner so the sum is a full lattice module, then count
    small = min(6, int(s.order - ch.leading_exponent))
    if i == p:
        j = p - 1 if kind == "Lambda" else 2 * p - 1
        total = _raw_irreducible(kind, i, p, ch.leading_exponent + small)
    else:
        li = i if kind == "Lambda" else p - i
        j = li - 1
        lead = _leading("Lambda", li, p)
        total = _raw_irreducible("Lambda", li, p, lead + small) + _raw_irreducible("Pi", p - li, p, lead + small)
    ref = char_lattice_counting(j, p, total.order)
    if not total.agrees_with(ref):
        raise SubscriptConventionMismatch(f"{ch.label}: disagrees with graded dimensions of V_(L+gamma_{j})")


def _lattice_lead(j: int, p: int) -> Fraction:
    m0 = min(range(j - 2 * p * 3, j + 2 * p * 3 + 1, 2 * p), key=lambda m: abs(m - (p - 1)))
    return Fraction(m0 * (m0 - 2 * p + 2), 4 * p) - central_charge(p) / 24


def char_lattice_counting(j: int, p: int, order) -> PuiseuxSeries:
    """``tr q^{L(0) - c/24}`` on ``V_{L + j alpha/2p}`` by counting basis monomials."""
    from .fock import Lattice

    order = to_fraction(order)
    L = Lattice(p)
    shift = central_charge(p) / 24
    dmax = order + shift
    terms: dict = {}
    for m in L.charges_in_class(j, dmax):
        base = L.charge_degree(m)
        k = 0
        while base + k < dmax:
            d = base + k
            if d not in terms:
                terms[d] = L.graded_dim(j, d)
            k += 1
    return PuiseuxSeries({d - shift: n for d, n in terms.items()}, order)


def char_lattice_module(j: int, p: int, terms: int = DEFAULT_TERMS, check: bool = True) -> CharacterSeries:
    """Character of ``V_{L + gamma_j}`` as ``theta_{j-p+1,p} / eta``, cross-checked by counting."""
    if p < 2:
        raise ValueError("p must be >= 2")
    lead = _lattice_lead(j, p)
    order = lead + terms
    s = _over_eta(theta_series(j - p + 1, p, order + 1), order)
    if check:
        ref = char_lattice_counting(j, p, order)
        if not s.agrees_with(ref):
            raise LatticeCharacterMismatch(f"theta quotient and graded dimensions differ for j={j}, p={p}")
    return CharacterSeries(f"lattice{j}", s, lead)


# ------------------------------------------------------------ numerics
def _series_arrays(s: PuiseuxSeries) -> tuple[np.ndarray, np.ndarray]:
    exps = np.array([float(e) for e, _ in s.items()], dtype=np.float64)
    coeffs = np.array([float(c) for _, c in s.items()], dtype=np.complex128)
    return exps, coeffs


def tail_bound(s: PuiseuxSeries, tau: complex) -> float:
    """Geometric estimate of the dropped tail ``sum_{e >= order} c_e q^e`` at ``tau``.

    Uses the largest coefficient in the last unit window below the order,
    doubled, as a stand-in for every later coefficient.
    """
    if s.order is None:
        return 0.0
    r = abs(cmath.exp(2j * cmath.pi * tau))
    if r >= 1:
        return float("inf")
    window = [abs(float(c)) for e, c in s.items() if e >= s.order - 1]
    cmax = 2 * max(window, default=1.0)
    cmax = max(cmax, 1.0)
    return cmax * r ** float(s.order) / (1 - r)


def numeric_eval(s: PuiseuxSeries, tau: complex, tol: float | None = None, use_numba: bool | None = None) -> complex:
    """``sum c_k exp(2 pi i tau e_k)`` in double precision.

    Raises ``InsufficientOrder`` when ``tol`` is given and the tail estimate
    from ``tail_bound`` exceeds it.
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    if tol is not None:
        b = tail_bound(s, tau)
        if b > tol:
            raise InsufficientOrder(f"tail estimate {b:.3g} exceeds tolerance {tol:.3g}")
    if s.is_zero():
        return 0j
    exps, coeffs = _series_arrays(s)
    return _accel.eval_series(exps, coeffs, tau, use_numba=use_numba)


def default_taus(p: int, count: int | None = None, layout: str = "arc") -> list[complex]:
    """Sample points for the closure test.

    ``arc``: ``count`` points ``i exp(i phi)``, ``phi`` in [-0.3, 0.3].
    ``wide``: radii 0.5..2 paired with angles in [-0.5, 0.5] by a fixed
    shuffle; much better conditioned once ``p >= 4``.
    """
    n = count or 3 * p
    if layout == "arc":
        return [1j * cmath.exp(1j * phi) for phi in np.linspace(-0.3, 0.3, n)]
    if layout == "wide":
        radii = np.geomspace(0.5, 2.0, n)
        phis = np.linspace(-0.5, 0.5, n)[np.random.default_rng(0).permutation(n)]
        return [r * 1j * cmath.exp(1j * f) for r, f in zip(radii, phis)]
    raise ValueError(f"unknown layout {layout!r}")


@lru_cache(maxsize=32)
def closure_basis(p: int, terms: int = 200, include_psi: bool = True) -> tuple:
    """Labels and exact series for the functions spanning the modular closure.

    ``psi_i`` is stored as the series of ``(dtheta)_{i,p} / eta``; the factor
    ``2 pi i tau`` is applied at evaluation time.
    """
    out = []
    for i in range(1, p + 1):
        out.append((f"Lambda{i}", char_irreducible("Lambda", i, p, terms, check=False).series, False))
    for i in range(1, p + 1):
        out.append((f"Pi{i}", char_irreducible("Pi", i, p, terms, check=False).series, False))
    if include_psi:
        for i in range(1, p):
            lead = Fraction(i * i, 4 * p) - Fraction(1, 24)
            s = _over_eta(dtheta_series(i, p, lead + terms + 1), lead + terms)
            out.append((f"psi{i}", s, True))
    return tuple(out)


def _eval_basis(basis, tau: complex) -> np.ndarray:
    vals = []
    for _, s, has_tau in basis:
        v = numeric_eval(s, tau)
        if has_tau:
            v *= 2j * np.pi * tau
        vals.append(v)
    return np.array(vals)


@dataclass
class ClosureResult:
    report: VerifyReport
    labels: list[str]
    S: np.ndarray
    residuals: list[float]
    condition: float
    taus: list[complex] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.report.ok


def s_closure_test(
    p: int,
    taus: list[complex] | None = None,
    tol: float = 1e-6,
    terms: int = 200,
    include_psi: bool = True,
    max_condition: float = 1e14,
) -> ClosureResult:
    """Least-squares test that ``f(-1/tau)`` lies in the span of the basis at ``tau``.

    Every relative residual must fall below ``tol``.  The recovered matrix
    ``S`` satisfies ``f_k(-1/tau) = sum_l S[k, l] f_l(tau)``.
    """
    basis = closure_basis(p, terms, include_psi)
    n = len(basis)
    taus = list(taus) if taus is not None else default_taus(p)
    if len(taus) < n:
        raise ValueError(f"need at least {n} sample points, got {len(taus)}")
    if any(complex(t).imag <= 0 for t in taus):
        raise ValueError("all samples must lie in the upper half plane")
    A = np.array([_eval_basis(basis, t) for t in taus])
    B = np.array([_eval_basis(basis, -1 / complex(t)) for t in taus])
    cond = float(np.linalg.cond(A))
    if not np.isfinite(cond) or cond > max_condition:
        raise IllConditioned(f"sample matrix condition number {cond:.3g} exceeds {max_condition:.3g}")
    sol, *_ = np.linalg.lstsq(A, B, rcond=None)
    S = sol.T
    rep = VerifyReport(p)
    residuals = []
    labels = [b[0] for b in basis]
    for k, lab in enumerate(labels):
        r = float(np.linalg.norm(A @ sol[:, k] - B[:, k]) / max(np.linalg.norm(B[:, k]), 1e-300))
        residuals.append(r)
        rep.add(f"chars.s_closure.{lab}", "S-transform lies in the span of the closure basis", r < tol, f"residual={r:.3e}")
    return ClosureResult(rep, labels, S, residuals, cond, taus)


# ------------------------------------------------------------ congruences
@dataclass
class CongruenceTable:
    p: int
    indices: list[int]
    rows: list[dict]
    prime: bool
    iff_holds: bool | None

    def integral_pairs(self) -> list[tuple[int, int]]:
        return [(r["i"], r["j"]) for r in self.rows if r["integral"]]


def congruence_table(p: int) -> CongruenceTable:
    """``h_{i,1} - h_{j,1} mod Z`` over ``i, j`` in ``{1..p} u {2p..3p-1}``.

    For prime ``p`` the table is checked against the pattern: integral
    exactly when ``|i - j| = 2p`` with the smaller index at most ``p - 1``.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    idx = list(range(1, p + 1)) + list(range(2 * p, 3 * p))
    rows = []
    ok = True
    for i in idx:
        for j in idx:
            if i == j:
                continue
            d = weight_h(i, 1, p) - weight_h(j, 1, p)
            integral = d.denominator == 1
            expected = abs(i - j) == 2 * p and min(i, j) <= p - 1
            ok &= integral == expected
            rows.append({"i": i, "j": j, "difference_mod_1": d - (d.numerator // d.denominator), "integral": integral})
    prime = p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))
    return CongruenceTable(p, idx, rows, prime, ok if prime else None)
