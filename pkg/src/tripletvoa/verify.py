"""The verification suite behind ``tripletvoa verify``.

Each check is a small function returning ``(ok, details)``; ``ok=None``
marks a check that does not apply at the requested ``p``.
"""

from __future__ import annotations

import fnmatch
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

import numpy as np

from . import chars, zhu
from .exactmath import PolyQ, poly_gcd
from .fock import Lattice
from .report import VerifyReport

__all__ = ["Config", "CHECKS", "run_verify", "REFERENCE_Q", "REFERENCE_H"]


@dataclass(frozen=True)
class Config:
    p: int = 2
    max_degree: int = 10
    series_order: int = 30
    tol: float = 1e-6
    seed: int = 0
    only: str | None = None
    timing: bool = False

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be >= 2")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


F = Fraction
# printed regression data for the interpolating polynomial and q
REFERENCE_H = {
    2: PolyQ([F(-4, 5), F(-6, 5), F(3, 5)]),
    3: PolyQ([1, F(25, 21), F(55, 84), F(-10, 21), F(5, 84)]),
    4: PolyQ([F(-200, 143), F(-3136, 1287), F(-1897, 3861), F(-245, 1287), F(3395, 15444), F(-35, 858), F(35, 15444)]),
}
REFERENCE_Q = {
    2: -PolyQ([F(-4, 5), F(24, 5)]),
    3: -PolyQ([1, F(-25, 7), F(60, 7)]),
    4: -PolyQ([F(-200, 143), F(25088, 3861), F(-2240, 351), F(35840, 3861)]),
}

# mode products of the weight-(2p-1) generators grow quickly with p
FOCK_MAX_P = 3

Check = Callable[[Config, dict], tuple]
CHECKS: dict[str, tuple[str, Check]] = {}


def check(cid: str, anchor: str):
    def deco(fn):
        CHECKS[cid] = (anchor, fn)
        return fn

    return deco


def _lattice(cfg: Config, cache: dict) -> Lattice:
    if "lattice" not in cache:
        cache["lattice"] = Lattice(cfg.p)
    return cache["lattice"]


# ------------------------------------------------------------------ fock
@check("fock.exp_product", "e^{-alpha}_n e^{-alpha} vanishes for |n| <= 2p and gives e^{-2alpha} at n = -2p-1")
def _exp_product(cfg, cache):
    L = _lattice(cfg, cache)
    tp = L.twop
    f = L.exp_vector(-tp)
    bad = [n for n in range(-tp, tp + 1) if not L.exp_mode(-tp, n, f).is_zero()]
    low = L.exp_mode(-tp, -tp - 1, f) == L.exp_vector(-2 * tp)
    return not bad and low, f"nonzero at n={bad}" if bad else ""


@check("fock.efh_relations", "E_i E = F_i F = Q(H_i H) = 0 for -2p <= i <= 2p")
def _efh(cfg, cache):
    if cfg.p > FOCK_MAX_P:
        return None, f"Fock checks run for p <= {FOCK_MAX_P}"
    L = _lattice(cfg, cache)
    E, Fv, H = (L.generator(x) for x in "EFH")
    bad = []
    for i in range(-L.twop, L.twop + 1):
        if not L.triplet_mode("E", i, E).is_zero():
            bad.append(("E", i))
        if not L.triplet_mode("F", i, Fv).is_zero():
            bad.append(("F", i))
        if not L.Q(L.triplet_mode("H", i, H)).is_zero():
            bad.append(("QH", i))
    return not bad, f"failures {bad}" if bad else ""


@check("fock.f_lowering", "F_{-(2np+1)} e^{-n alpha} = e^{-(n+1) alpha}")
def _f_lowering(cfg, cache):
    L = _lattice(cfg, cache)
    tp = L.twop
    ok = all(
        L.triplet_mode("F", -(n * tp + 1), L.exp_vector(-n * tp)) == L.exp_vector(-(n + 1) * tp) for n in (1, 2)
    )
    return ok, ""


@check("fock.kernel_generators", "the screening e^{-alpha/p}_0 annihilates omega, E, F, H")
def _kernel_gens(cfg, cache):
    L = _lattice(cfg, cache)
    bad = [x for x in ("omega", "E", "F", "H") if not L.Qt(L.generator(x)).is_zero()]
    return not bad, f"not annihilated: {bad}" if bad else ""


@check("fock.generator_weights", "E, F, H are Virasoro primaries of weight 2p-1")
def _gen_weights(cfg, cache):
    L = _lattice(cfg, cache)
    ok = all(L.check_singular(L.generator(x), 2 * cfg.p - 1) for x in "EFH")
    return ok, ""


def _sample_vectors(L: Lattice) -> list:
    p = L.p
    return [
        L.vacuum(),
        L.exp_vector(1),
        L.heis_mode(-1, L.exp_vector(-2 * p)),
        L.heis_mode(-2, L.heis_mode(-1, L.exp_vector(p))),
    ]


@check("fock.virasoro_algebra", "[L(m),L(n)] = (m-n)L(m+n) + c/12 (m^3-m) delta_{m+n,0}")
def _vir(cfg, cache):
    L = _lattice(cfg, cache)
    c = zhu.central_charge(cfg.p)
    for v in _sample_vectors(L):
        for m in range(-2, 3):
            for n in range(-2, 3):
                lhs = L.virasoro_mode(m, L.virasoro_mode(n, v)) - L.virasoro_mode(n, L.virasoro_mode(m, v))
                rhs = L.virasoro_mode(m + n, v) * (m - n)
                if m + n == 0:
                    rhs = rhs + v * (c / 12 * (m ** 3 - m))
                if lhs != rhs:
                    return False, f"m={m} n={n}"
    return True, ""


@check("fock.screening_commutes", "Q and e^{-alpha/p}_0 commute with L(n)")
def _screen(cfg, cache):
    L = _lattice(cfg, cache)
    for v in _sample_vectors(L):
        for n in range(-2, 3):
            if L.Q(L.virasoro_mode(n, v)) != L.virasoro_mode(n, L.Q(v)):
                return False, f"Q, n={n}"
            # the second screening only acts on charges divisible by p
            if all(m % cfg.p == 0 for m in v.charges()):
                if L.Qt(L.virasoro_mode(n, v)) != L.virasoro_mode(n, L.Qt(v)):
                    return False, f"Qt, n={n}"
    return True, ""


@check("fock.field_mode", "state-field map of H agrees with the screening commutator")
def _field_mode(cfg, cache):
    L = _lattice(cfg, cache)
    H = L.generator("H")
    for v in _sample_vectors(L)[:3]:
        if any(m % L.twop for m in v.charges()):
            continue
        for n in range(2 * cfg.p - 4, 2 * cfg.p + 1):
            if L.field_mode(H, n, v) != L.triplet_mode("H", n, v):
                return False, f"n={n}"
    return True, ""


@check("fock.singular_vectors", "Q^j e^{gamma_i - n alpha} is singular of weight h_{i+1,2n+1}")
def _singular(cfg, cache):
    L = _lattice(cfg, cache)
    p = cfg.p
    nmax = 2 if p == 2 else 1
    bad = []
    for i in range(2 * p):
        lo_n = 0 if i < p else 1
        for n in range(lo_n, nmax + 1):
            jmax = 2 * n if i < p else 2 * n - 1
            v = L.gamma(i - L.twop * n)
            h = zhu.weight_h(i + 1, 2 * n + 1, p)
            for j in range(jmax + 1):
                if not L.check_singular(v, h):
                    bad.append((i, n, j))
                v = L.Q(v)
            if not v.is_zero():
                bad.append((i, n, "next power nonzero"))
    return not bad, f"failures {bad}" if bad else ""


@check("fock.o_H_charge", "o(H) acts on e^{t alpha/2p} as C(t, 2p-1)")
def _o_h(cfg, cache):
    L = _lattice(cfg, cache)
    bad = [t for t in range(7) if zhu.o_H_on_charge(cfg.p, t, L) != comb(t, 2 * cfg.p - 1)]
    return not bad, f"t={bad}" if bad else ""


# ------------------------------------------------------------------- zhu
@check("zhu.weight_symmetry", "h_{m+1,1} = h_{2p-1-m,1} for 0 <= m <= 2p-2")
def _wsym(cfg, cache):
    p = cfg.p
    return all(zhu.weight_h(m + 1, 1, p) == zhu.weight_h(2 * p - 1 - m, 1, p) for m in range(2 * p - 1)), ""


@check("zhu.weight_inequality", "h_{i,1} < h_{2p+i,1} for 1 <= i <= p-1")
def _wineq(cfg, cache):
    p = cfg.p
    return all(zhu.weight_h(i, 1, p) < zhu.weight_h(2 * p + i, 1, p) for i in range(1, p)), ""


@check("zhu.f_factored", "f_p equals its grouped factorisation")
def _ffact(cfg, cache):
    f = zhu.f_p_poly(cfg.p)
    return f == zhu.f_p_factored(cfg.p) and f.degree == 3 * cfg.p - 1, ""


@check("zhu.f_double_roots", "f_p has double roots exactly at h_{i,1}, i < p")
def _fdouble(cfg, cache):
    p = cfg.p
    f = zhu.f_p_poly(p)
    g = poly_gcd(f, f.derivative())
    want = PolyQ.from_roots([zhu.weight_h(i, 1, p) for i in range(1, p)])
    return g == want, ""


@check("zhu.phi_identity", "binomial sum equals A_p C(t,3p-1) C(t+p,3p-1)")
def _phi(cfg, cache):
    return zhu.phi_tilde_poly(cfg.p) == zhu.phi_tilde_closed_form(cfg.p), ""


@check("zhu.phi_recursion", "(t+1)(p+t+1) Phi(t) = (2p-t-2)(3p-t-2) Phi(t+1)")
def _phirec(cfg, cache):
    p = cfg.p
    phi = zhu.phi_tilde_poly(p)
    t = PolyQ.x()
    lhs = (t + 1) * (t + p + 1) * phi
    rhs = (PolyQ([2 * p - 2, -1])) * PolyQ([3 * p - 2, -1]) * phi(t + 1)
    return lhs == rhs, ""


@check("zhu.phi_spot", "Phi(3p-1) = (-1)^p C(2p,p)")
def _phispot(cfg, cache):
    p = cfg.p
    return zhu.phi_tilde_poly(p)(3 * p - 1) == (-1) ** p * comb(2 * p, p), ""


@check("zhu.residue_oracle", "double coefficient extraction agrees with the binomial sum, t = 0..30")
def _res(cfg, cache):
    phi = zhu.phi_tilde_poly(cfg.p)
    bad = [t for t in range(31) if zhu.residue_oracle(cfg.p, t) != phi(t)]
    return not bad, f"t={bad}" if bad else ""


@check("zhu.residue_random", "double coefficient extraction at seeded random t")
def _resrand(cfg, cache):
    rng = random.Random(cfg.seed)
    phi = zhu.phi_tilde_poly(cfg.p)
    ts = sorted(rng.sample(range(31, 80), 4))
    bad = [t for t in ts if zhu.residue_oracle(cfg.p, t) != phi(t)]
    return not bad, f"t={ts}"


@check("zhu.zhu_shadow", "Phi(t) = B_p f_p(t(t-2p+2)/4p)")
def _shadow(cfg, cache):
    p = cfg.p
    B = zhu.B_p_const(p)
    ok = zhu.phi_tilde_poly(p) == zhu.f_p_poly(p)(zhu.charge_to_weight(p)) * B
    return ok and (B > 0) == (p % 2 == 0), f"B_p={B}"


@check("zhu.H_closed_form", "interpolating H_p equals the product-times-sum form")
def _hclosed(cfg, cache):
    H = zhu.H_p_poly(cfg.p)
    return H == zhu.H_p_closed_form(cfg.p) and H.degree == 2 * cfg.p - 2, ""


@check("zhu.q_printed", "q_poly reproduces the tabulated q for p = 2, 3, 4")
def _qprint(cfg, cache):
    if cfg.p not in REFERENCE_Q:
        return None, "no tabulated value"
    return zhu.q_poly(cfg.p) == REFERENCE_Q[cfg.p] and zhu.H_p_poly(cfg.p) == REFERENCE_H[cfg.p], ""


@check("zhu.q_degree", "deg q = p - 1")
def _qdeg(cfg, cache):
    return zhu.q_poly(cfg.p).degree == cfg.p - 1, ""


@check("zhu.q_nonvanishing", "q(h_{i,1}) != 0 and gcd(q, f_p) = 1")
def _qnz(cfg, cache):
    p = cfg.p
    return zhu.q_nonvanishing(p) and poly_gcd(zhu.q_poly(p), zhu.f_p_poly(p)) == PolyQ.const(1), ""


@check("zhu.A_recursion", "degree-two recursion for A_p(t) matches the direct sum")
def _arec(cfg, cache):
    p = cfg.p
    seq = zhu.A_p_sequence(p, 2 * p - 2)
    bad = [t for t, a in enumerate(seq) if a != zhu.A_p_direct(p, t)]
    return not bad, f"t={bad}" if bad else ""


@check("zhu.A_symmetry", "A_p(2p-2-t) = A_p(t)")
def _asym(cfg, cache):
    p = cfg.p
    seq = zhu.A_p_sequence(p, 2 * p - 2)
    return seq == seq[::-1], ""


@check("zhu.A_negative", "A_p(t) < 0 for t in [0, 2p-2]")
def _aneg(cfg, cache):
    return all(a < 0 for a in zhu.A_p_sequence(cfg.p, 2 * cfg.p - 2)), ""


@check("zhu.C_p_identity", "C(t,2p-1)^2 = C_p P(t(t-2p+2)/4p)")
def _cp(cfg, cache):
    try:
        c = zhu.C_p_const(cfg.p)
    except zhu.IdentityFailure as e:
        return False, str(e)
    return c > 0, f"C_p={c}"


@check("zhu.idempotents", "v_i, w_i, v_p satisfy the idempotent relations mod f_p")
def _idem(cfg, cache):
    rep = zhu.idempotents(cfg.p)
    cache["zhu_report"] = rep
    bad = [k for k, v in rep.relations.items() if not v]
    return not bad and rep.dim_bound == 6 * cfg.p - 1, f"failed: {bad}" if bad else ""


@check("zhu.idempotent_example", "p = 2 values lambda_1 = -832/9, nu_1 = 64/3, r(0) = 13/64, f(0) = 3/64")
def _idem_ex(cfg, cache):
    if cfg.p != 2:
        return None, "only tabulated for p=2"
    a = zhu.idempotents(2).two_dim_ideals[0]
    ok = (a.lam, a.nu, a.r_at_h, a.f_at_h) == (F(-832, 9), F(64, 3), F(13, 64), F(3, 64))
    x = PolyQ.x()
    v1 = PolyQ([-3, 13]) * (x + F(1, 8)) * (x - F(3, 8)) * (x - 1) * F(-64, 9)
    return ok and a.v == v1, ""


@check("zhu.blocks", "block labels: Lambda(i), Pi(p-i) share h_{i,1}; p+1 labels in all")
def _blocks(cfg, cache):
    p = cfg.p
    labels = {zhu.block_of(k, i, p) for k in ("Lambda", "Pi") for i in range(1, p + 1)}
    pairs = all(zhu.block_of("Lambda", i, p) == zhu.block_of("Pi", p - i, p) for i in range(1, p))
    return len(labels) == p + 1 and pairs, f"{len(labels)} labels"


# ----------------------------------------------------------------- chars
@check("chars.exactness", "char Lambda(i) + char Pi(p-i) = char V_{L+gamma_{i-1}}")
def _exact(cfg, cache):
    p, n = cfg.p, cfg.series_order
    bad = []
    for i in range(1, p):
        a = chars.char_irreducible("Lambda", i, p, n).series + chars.char_irreducible("Pi", p - i, p, n).series
        b = chars.char_lattice_module(i - 1, p, n).series
        if not a.agrees_with(b):
            bad.append(i)
    return not bad, f"i={bad}" if bad else ""


@check("chars.kernel_identity", "kernel dimensions of the second screening match char Lambda(1)")
def _kernel(cfg, cache):
    L = _lattice(cfg, cache)
    D = cfg.max_degree
    ch = chars.char_irreducible("Lambda", 1, cfg.p, D + 1).series
    lead = ch.valuation()
    bad = [d for d in range(D + 1) if L.kernel_dim_Qtilde(d) != ch.coefficient(lead + d)]
    return not bad, f"degrees 0..{D}" + (f", mismatch at {bad}" if bad else "")


@check("chars.nonnegative", "irreducible characters have nonnegative integer coefficients")
def _nonneg(cfg, cache):
    p = cfg.p
    for k in ("Lambda", "Pi"):
        for i in range(1, p + 1):
            s = chars.char_irreducible(k, i, p, cfg.series_order).series
            if any(c < 0 or c.denominator != 1 for _, c in s.items()):
                return False, f"{k}{i}"
    return True, ""


@check("chars.leading_terms", "leading terms 1 q^{h_{i,1}-c/24} for Lambda(i), 2 q^{h_{3p-i,1}-c/24} for Pi(i)")
def _lead(cfg, cache):
    p = cfg.p
    c = zhu.central_charge(p)
    for i in range(1, p + 1):
        a = chars.char_irreducible("Lambda", i, p, 4).series
        b = chars.char_irreducible("Pi", i, p, 4).series
        if (a.valuation(), a.leading_coefficient()) != (zhu.weight_h(i, 1, p) - c / 24, 1):
            return False, f"Lambda{i}"
        if (b.valuation(), b.leading_coefficient()) != (zhu.weight_h(3 * p - i, 1, p) - c / 24, 2):
            return False, f"Pi{i}"
    return True, ""


@check("chars.dtheta_antisymmetry", "(dtheta)_{2p-j} = -(dtheta)_j termwise")
def _dtheta(cfg, cache):
    p = cfg.p
    order = Fraction(cfg.series_order)
    ok = all(
        chars.dtheta_series(2 * p - j, p, order) == chars.dtheta_series(j, p, order) * -1 for j in range(0, 2 * p + 1)
    )
    return ok and chars.dtheta_series(0, p, order).is_zero(), ""


@check("chars.numeric_tail", "numeric value agrees with a double-order series within the tail estimate")
def _ntail(cfg, cache):
    tau = 0.3j
    s1 = chars.char_irreducible("Lambda", 1, cfg.p, 15, check=False).series
    s2 = chars.char_irreducible("Lambda", 1, cfg.p, 30, check=False).series
    b = chars.tail_bound(s1, tau)
    d = abs(chars.numeric_eval(s1, tau) - chars.numeric_eval(s2, tau))
    return d <= b, f"difference={d:.3e} bound={b:.3e}"


@check("chars.s_closure", "S-transforms of the 3p-1 functions close on their span")
def _sclose(cfg, cache):
    layout = "arc" if cfg.p <= 3 else "wide"
    try:
        res = chars.s_closure_test(cfg.p, chars.default_taus(cfg.p, layout=layout), tol=cfg.tol)
    except chars.IllConditioned as e:
        return False, str(e)
    cache["closure"] = res
    inv = abs(np.linalg.det(res.S)) > 1e-8
    # S^2 = 1 on this basis; loose bound, the recovered entries inherit the conditioning
    sq = float(np.abs(res.S @ res.S - np.eye(len(res.labels))).max())
    return res.ok and inv and sq < 1e-3, (
        f"max residual={max(res.residuals):.3e}, cond={res.condition:.3e}, |S^2-1|={sq:.1e}"
    )


@check("chars.congruence", "for prime p, h_{i,1} - h_{j,1} is integral iff |i-j| = 2p with min(i,j) <= p-1")
def _cong(cfg, cache):
    t = chars.congruence_table(cfg.p)
    if not t.prime:
        return None, "p is not prime"
    return t.iff_holds, f"integral pairs {t.integral_pairs()}"


# ---------------------------------------------------------------- runner
def _top_relations(cfg: Config, cache: dict) -> VerifyReport:
    return zhu.top_component_relations(cfg.p, _lattice(cfg, cache))


def run_verify(cfg: Config) -> VerifyReport:
    rep = VerifyReport(cfg.p)
    cache: dict = {}

    def wanted(cid: str) -> bool:
        return cfg.only is None or fnmatch.fnmatchcase(cid, cfg.only)

    for cid in sorted(CHECKS):
        if not wanted(cid):
            continue
        anchor, fn = CHECKS[cid]
        t0 = time.perf_counter()
        try:
            ok, details = fn(cfg, cache)
        except Exception as e:  # failures are data
            ok, details = False, f"{type(e).__name__}: {e}"
        ms = int((time.perf_counter() - t0) * 1000) if cfg.timing else 0
        rep.add(cid, anchor, ok, details, ms)

    # the top-space checks come out of one computation; ids are known only afterwards
    t0 = time.perf_counter()
    try:
        top = _top_relations(cfg, cache)
    except Exception as e:
        top = VerifyReport(cfg.p)
        top.add("zhu.top.error", "top-space relations could be computed", False, f"{type(e).__name__}: {e}")
    ms = int((time.perf_counter() - t0) * 1000) if cfg.timing else 0
    for c in top.checks:
        if wanted(c.id):
            c.elapsed_ms = ms
            rep.checks.append(c)
    return rep.sorted()
