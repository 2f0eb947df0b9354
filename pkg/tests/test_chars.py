import math
from fractions import Fraction as F

import numpy as np
import pytest

from tripletvoa import chars
from tripletvoa.exactmath import PuiseuxSeries
from tripletvoa.fock import Lattice
from tripletvoa.zhu import central_charge, weight_h


def pentagonal_oracle(deg):
    # Euler: prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2}
    c = [0] * (deg + 1)
    for k in range(-deg, deg + 1):
        e = k * (3 * k - 1) // 2
        if 0 <= e <= deg:
            c[e] += (-1) ** k
    return c


def test_eta_matches_pentagonal_theorem():
    s = chars.eta_series(60)
    want = pentagonal_oracle(59)
    assert [s.coefficient(F(1, 24) + k) for k in range(60)] == want
    assert want[:6] == [1, -1, -1, 0, 0, 1]


def test_eta_inverse_contract():
    s = chars.eta_series(20)
    assert (s * s.inverse()).agrees_with(PuiseuxSeries.one(order=19))
    with pytest.raises(ValueError):
        chars.eta_series(F(1, 24))


def test_eta_at_i():
    v = chars.numeric_eval(chars.eta_series(40), 1j)
    assert v.imag == pytest.approx(0, abs=1e-15)
    assert v.real == pytest.approx(math.gamma(0.25) / (2 * math.pi ** 0.75), rel=1e-12)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_theta_examples(p):
    th0 = chars.theta_series(0, p, 10)
    assert th0.valuation() == 0 and th0.leading_coefficient() == 1
    assert chars.dtheta_series(0, p, 10).is_zero()
    assert chars.theta_series(p, p, 10).valuation() == F(p, 4)
    # theta_{p,p} pairs n with -1-n
    assert chars.theta_series(p, p, 10).leading_coefficient() == 2


@pytest.mark.parametrize("p", [2, 3, 4])
def test_theta_brute_force(p):
    order = F(12)
    want: dict = {}
    for j in range(-2 * p, 2 * p + 1):
        want.clear()
        for n in range(-30, 31):
            k = 2 * p * n + j
            e = F(k * k, 4 * p)
            if e < order:
                want[e] = want.get(e, 0) + k
        assert chars.dtheta_series(j, p, order) == PuiseuxSeries(want, order)
        assert chars.dtheta_series(2 * p - j, p, order) == chars.dtheta_series(j, p, order) * -1


def test_lambda1_p2_matches_kernel_dims():
    ch = chars.char_irreducible("Lambda", 1, 2, 12)
    assert ch.leading_exponent == F(1, 12)
    coeffs = [ch.series.coefficient(F(1, 12) + d) for d in range(11)]
    assert coeffs[:4] == [1, 0, 1, 4]
    L = Lattice(2)
    assert coeffs == [L.kernel_dim_Qtilde(d, "modular") for d in range(11)]


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_leading_terms(p):
    c = central_charge(p)
    for i in range(1, p + 1):
        a = chars.char_irreducible("Lambda", i, p, 5)
        b = chars.char_irreducible("Pi", i, p, 5)
        assert a.series.valuation() == weight_h(i, 1, p) - c / 24
        assert a.series.leading_coefficient() == 1
        assert b.series.valuation() == weight_h(3 * p - i, 1, p) - c / 24
        assert b.series.leading_coefficient() == 2
    assert weight_h(p, 1, p) == F(-(p - 1) ** 2, 4 * p)


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_exactness(p):
    for i in range(1, p):
        a = chars.char_irreducible("Lambda", i, p, 30) + chars.char_irreducible("Pi", p - i, p, 30)
        b = chars.char_lattice_module(i - 1, p, 30)
        assert a.series.agrees_with(b.series)
        assert a.series.order >= b.series.order - 1


@pytest.mark.parametrize("p", [2, 3])
def test_lattice_theta_vs_counting(p):
    for j in range(2 * p):
        s = chars.char_lattice_module(j, p, 10, check=False).series
        assert s.agrees_with(chars.char_lattice_counting(j, p, s.order))
    v = chars.char_lattice_module(0, p, 5).series
    assert v.leading_coefficient() == 1


def test_lattice_endpoints():
    p = 3
    assert chars.char_irreducible("Lambda", p, p, 10).series.agrees_with(chars.char_lattice_module(p - 1, p, 10).series)
    assert chars.char_irreducible("Pi", p, p, 10).series.agrees_with(chars.char_lattice_module(2 * p - 1, p, 10).series)


def test_subscript_convention_guard(monkeypatch):
    real = chars.theta_series
    # level-first reading swaps the roles of the index and the level
    monkeypatch.setattr(chars, "theta_series", lambda j, p, order: real(p, p, order) if j != p else real(j, p, order))
    with pytest.raises(chars.SubscriptConventionMismatch):
        chars.char_irreducible("Lambda", 1, 2, 8)


def test_numeric_eval_trivial():
    one = PuiseuxSeries.one(order=5)
    assert chars.numeric_eval(one, 1j) == 1
    with pytest.raises(ValueError):
        chars.numeric_eval(one, 1.0)


def test_tail_bound_and_insufficient_order():
    s1 = chars.char_irreducible("Lambda", 1, 2, 10, check=False).series
    s2 = chars.char_irreducible("Lambda", 1, 2, 40, check=False).series
    for tau in (0.4j, 1j, 0.2 + 0.8j):
        diff = abs(chars.numeric_eval(s1, tau) - chars.numeric_eval(s2, tau))
        assert diff <= chars.tail_bound(s1, tau)
    with pytest.raises(chars.InsufficientOrder):
        chars.numeric_eval(s1, 0.05j, tol=1e-10)


def test_characters_real_positive_at_i():
    for k in ("Lambda", "Pi"):
        for i in (1, 2):
            v = chars.numeric_eval(chars.char_irreducible(k, i, 2, 40).series, 1j)
            assert v.real > 0 and abs(v.imag) < 1e-14


@pytest.mark.parametrize("p", [2, 3])
def test_s_closure(p):
    res = chars.s_closure_test(p, chars.default_taus(p), tol=1e-6)
    assert res.ok, res.residuals
    n = 3 * p - 1
    assert res.S.shape == (n, n)
    assert abs(np.linalg.det(res.S)) == pytest.approx(1, rel=1e-4)
    assert np.allclose(res.S @ res.S, np.eye(n), atol=1e-5)


def test_s_closure_needs_psi():
    # without the tau-weighted functions the span does not close
    res = chars.s_closure_test(2, chars.default_taus(2), tol=1e-6, include_psi=False)
    assert not res.ok
    assert max(res.residuals) > 1e-3


def test_s_closure_input_validation():
    with pytest.raises(ValueError):
        chars.s_closure_test(2, [1j, 1.1j])
    with pytest.raises(ValueError):
        chars.s_closure_test(2, [1j] * 4 + [-1j])
    with pytest.raises(chars.IllConditioned):
        chars.s_closure_test(2, [1j] * 6)


def test_s_closure_wide_layout_p4():
    res = chars.s_closure_test(4, chars.default_taus(4, layout="wide"), tol=1e-6)
    assert res.ok


def test_congruence_examples():
    t = chars.congruence_table(2)
    assert sorted(t.integral_pairs()) == [(1, 5), (5, 1)]
    assert t.iff_holds
    assert chars.congruence_table(4).iff_holds is None


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13, 17, 19, 23])
def test_congruence_primes(p):
    t = chars.congruence_table(p)
    assert t.prime and t.iff_holds
