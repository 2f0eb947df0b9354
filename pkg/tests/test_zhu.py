from fractions import Fraction as F
from math import comb, factorial

import pytest
import sympy
from hypothesis import given, strategies as st

from tripletvoa import zhu
from tripletvoa.exactmath import PolyQ, binom_poly, poly_gcd
from tripletvoa.fock import Lattice

x = PolyQ.x()

# tabulated q polynomials for small p
PRINTED_Q = {
    2: -(x * F(24, 5) - F(4, 5)),
    3: -(x * x * F(60, 7) - x * F(25, 7) + 1),
    4: -(x ** 3 * F(35840, 3861) - x * x * F(2240, 351) + x * F(25088, 3861) - F(200, 143)),
}
PRINTED_H = {
    2: PolyQ([F(-4, 5), F(-6, 5), F(3, 5)]),
    3: PolyQ([1, F(25, 21), F(55, 84), F(-10, 21), F(5, 84)]),
}


def sym_weight(m, n, p):
    # sympy oracle for h_{m,n}
    return sympy.Rational((m - n * p - p + 1) * (m - n * p + p - 1), 4 * p)


@given(st.integers(-10, 20), st.integers(-3, 3), st.integers(2, 9))
def test_weight_formula(m, n, p):
    assert zhu.weight_h(m, n, p) == F(str(sym_weight(m, n, p)))


@pytest.mark.parametrize("p", range(2, 9))
def test_weight_symmetry_and_inequality(p):
    for m in range(2 * p - 1):
        assert zhu.weight_h(m + 1, 1, p) == zhu.weight_h(2 * p - 1 - m, 1, p)
    for i in range(1, p):
        assert zhu.weight_h(i, 1, p) < zhu.weight_h(2 * p + i, 1, p)


def test_p2_weights():
    # c = -2: h_{1,1} = 0, h_{2,1} = -1/8, h_{3,1} = 3/8, h_{4,1} = 1
    assert [zhu.weight_h(i, 1, 2) for i in range(1, 6)] == [0, F(-1, 8), 0, F(3, 8), 1]


@pytest.mark.parametrize("p", range(2, 7))
def test_f_p_roots(p):
    f = zhu.f_p_poly(p)
    assert f.degree == 3 * p - 1
    assert f == zhu.f_p_factored(p)
    df = f.derivative()
    for i in range(1, p):
        h = zhu.weight_h(i, 1, p)
        assert f(h) == 0 and df(h) == 0
    for i in (p, 2 * p):
        assert df(zhu.weight_h(i, 1, p)) != 0


@pytest.mark.parametrize("p", range(2, 9))
def test_binomial_identity(p):
    phi = zhu.phi_tilde_poly(p)
    assert phi == zhu.phi_tilde_closed_form(p)
    assert zhu.phi_tilde_constant(p) == F((-1) ** p * comb(2 * p, p), comb(4 * p - 1, p))
    t = PolyQ.x()
    lhs = (t + 1) * (t + p + 1) * phi
    rhs = PolyQ([2 * p - 2, -1]) * PolyQ([3 * p - 2, -1]) * phi(t + 1)
    assert lhs == rhs


def test_phi_spot_values():
    assert zhu.phi_tilde_poly(2)(5) == 6
    for p in range(2, 7):
        assert zhu.phi_tilde_poly(p)(3 * p - 1) == (-1) ** p * comb(2 * p, p)


@pytest.mark.parametrize("p", [2, 3])
def test_residue_oracle_vs_sympy(p):
    z1, z2 = sympy.symbols("z1 z2")
    for t in (0, 3, 7, 2 * p + 5):
        e = sympy.expand((z1 - z2) ** (2 * p) * (1 + z1) ** t * (1 + z2) ** t)
        want = sympy.Poly(e, z1, z2).coeff_monomial(z1 ** (4 * p - 1) * z2 ** (4 * p - 1))
        assert zhu.residue_oracle(p, t) == int(want)
        assert zhu.phi_tilde_poly(p)(t) == int(want)


@pytest.mark.parametrize("p", range(2, 7))
def test_shadow(p):
    assert zhu.phi_tilde_poly(p) == zhu.f_p_poly(p)(zhu.charge_to_weight(p)) * zhu.B_p_const(p)


@pytest.mark.parametrize("p", [2, 3, 4])
def test_q_matches_table(p):
    assert zhu.q_poly(p) == PRINTED_Q[p]
    if p in PRINTED_H:
        assert zhu.H_p_poly(p) == PRINTED_H[p]


@pytest.mark.parametrize("p", range(2, 9))
def test_H_p_forms_agree(p):
    H = zhu.H_p_poly(p)
    assert H == zhu.H_p_closed_form(p)
    for t in range(2 * p - 1, 3 * p - 1):
        assert H(t) == comb(t, 2 * p - 1)
        assert H(2 * p - 2 - t) == H(t)
    assert H == -zhu.q_poly(p)(zhu.charge_to_weight(p))


@pytest.mark.parametrize("p", range(2, 21))
def test_q_degree_and_nonvanishing(p):
    q = zhu.q_poly(p)
    assert q.degree == p - 1
    assert zhu.q_nonvanishing(p)
    assert poly_gcd(q, zhu.f_p_poly(p)).degree == 0


def test_not_symmetric_raises(monkeypatch):
    monkeypatch.setattr(zhu, "H_p_poly", lambda p: PolyQ([0, 1]))
    with pytest.raises(zhu.NotSymmetric):
        zhu.q_poly(2)


@pytest.mark.parametrize("p", range(2, 11))
def test_A_p_recursion_vs_direct(p):
    seq = zhu.A_p_sequence(p, 2 * p - 2)
    assert seq == [zhu.A_p_direct(p, t) for t in range(2 * p - 1)]
    assert seq == seq[::-1]


def test_A_p_negative_to_50():
    for p in range(2, 51):
        assert all(a < 0 for a in zhu.A_p_sequence(p, 2 * p - 2))


def test_A_p_relates_to_H_p():
    for p in (2, 3, 4):
        pr = zhu._pr_poly(p)
        H = zhu.H_p_poly(p)
        for t in range(2 * p - 1):
            assert H(t) == pr(t) * zhu.A_p_direct(p, t) / factorial(2 * p - 1)


def test_recursion_pole():
    with pytest.raises(zhu.RecursionPole):
        zhu.A_p_sequence(3, 5)


@pytest.mark.parametrize("p", range(2, 9))
def test_C_p(p):
    cp = zhu.C_p_const(p)
    assert cp == F((4 * p) ** (2 * p - 1), factorial(2 * p - 1) ** 2)
    assert binom_poly(2 * p - 1) ** 2 == zhu.P_poly(p)(zhu.charge_to_weight(p)) * cp


def test_C_p_values():
    assert [zhu.C_p_const(p) for p in (2, 3, 4)] == [F(128, 9), F(432, 25), F(1048576, 99225)]


def test_identity_failure(monkeypatch):
    monkeypatch.setattr(zhu, "P_poly", lambda p: PolyQ([1]))
    with pytest.raises(zhu.IdentityFailure):
        zhu.C_p_const(2)


def test_idempotent_example_p2():
    rep = zhu.idempotents(2)
    (a,) = rep.two_dim_ideals
    assert (a.lam, a.nu, a.r_at_h, a.f_at_h) == (F(-832, 9), F(64, 3), F(13, 64), F(3, 64))
    assert a.status == "proved"
    assert rep.dim_bound == 11
    assert len(rep.matrix_ideals) == 2


@pytest.mark.parametrize("p", range(2, 11))
def test_idempotent_relations(p):
    rep = zhu.idempotents(p)
    assert rep.relations_hold, [k for k, v in rep.relations.items() if not v]
    f = rep.f_p
    vp = rep.one_dim_ideal["v_p"]
    # independent recomputation of the orthogonality relations
    for a in rep.two_dim_ideals:
        assert ((a.v * a.v - a.v) % f).is_zero()
        assert ((a.w * a.w) % f).is_zero()
        assert ((vp * a.v) % f).is_zero()
        for b in rep.two_dim_ideals:
            want = a.w % f if a.i == b.i else PolyQ()
            assert (b.v * a.w) % f == want
    assert rep.dim_bound == 6 * p - 1


def test_conjecture_status_composite():
    statuses = [a.status for a in zhu.idempotents(4).two_dim_ideals]
    assert statuses == ["conjectural", "conjectural", "proved"]
    assert all(a.status == "proved" for a in zhu.idempotents(5).two_dim_ideals)


@pytest.mark.parametrize("p", range(2, 8))
def test_blocks(p):
    labels = {zhu.block_of(k, i, p) for k in ("Lambda", "Pi") for i in range(1, p + 1)}
    assert len(labels) == p + 1
    for i in range(1, p):
        assert zhu.block_of("Lambda", i, p) == zhu.block_of("Pi", p - i, p)
    assert zhu.block_of("Lambda", p, p).index == p
    assert zhu.block_of("Pi", p, p).index == 2 * p


def test_block_examples():
    assert zhu.block_of("Lambda", 1, 2).weight == 0
    assert zhu.block_of("Pi", 1, 2).weight == 0
    with pytest.raises(ValueError):
        zhu.block_of("Lambda", 3, 2)


# --------------------------------------------------- top components
@pytest.fixture(scope="module")
def top2():
    return zhu.top_component_relations(2, Lattice(2))


def test_one_dimensional_tops_trivial(top2):
    for c in top2.checks:
        if c.id.startswith("zhu.top.Lambda"):
            assert c.status == "pass", c


def test_top_identities_without_sign(top2):
    by_id = {c.id: c for c in top2.checks}
    for comp in ("Pi1", "Pi2"):
        for name in ("omega", "e_squared", "f_squared", "h_squared"):
            assert by_id[f"zhu.top.{comp}.{name}"].status == "pass"


def test_realised_structure_polynomial_is_negated(top2):
    # the commutators close with -q in place of q; recorded as a diagnostic
    c = {c.id: c for c in top2.checks}["zhu.top.q_sign"]
    assert c.status == "pass"
    assert c.details.endswith("-1")


def test_o_H_eigenvalues_on_Pi_tops():
    for comp in zhu.top_component_matrices(2):
        if len(comp["basis"]) != 2:
            continue
        H = sympy.Matrix(comp["matrices"]["H"])
        qh = zhu.q_poly(2)(comp["weight"])
        eig = sorted(H.eigenvals())
        assert eig == sorted([sympy.Rational(qh.numerator, qh.denominator), -sympy.Rational(qh.numerator, qh.denominator)])


def test_strict_mode_raises():
    with pytest.raises(zhu.RelationFailure) as err:
        zhu.top_component_relations(2, strict=True)
    assert err.value.weight is not None


def test_o_H_on_charge():
    L = Lattice(2)
    for t in range(7):
        assert zhu.o_H_on_charge(2, t, L) == comb(t, 3)


def test_local_coordinates_detect_broken_relation():
    p = 3
    f = zhu.f_p_poly(p)
    loc = zhu._Local(f, zhu.zhu_roots(p))
    a = zhu.idempotents(p).two_dim_ideals[0]
    assert loc.mul(loc(a.v), loc(a.v)) == loc(a.v)
    bad = a.v + x ** 0 * F(1, 1000)
    assert loc.mul(loc(bad), loc(bad)) != loc(bad)
    # agrees with reduction mod f on an arbitrary product
    g = x ** 7 - x * 3 + 2
    assert loc(g * a.w) == loc.mul(loc(g), loc(a.w)) == loc((g * a.w) % f)
    with pytest.raises(ValueError):
        zhu._Local(f, zhu.zhu_roots(p)[1:])
