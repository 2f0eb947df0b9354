from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tripletvoa.fock import FockVector, IncompatibleModeIndex, Lattice, partitions
from tripletvoa.zhu import central_charge, weight_h

LAT = {p: Lattice(p) for p in (2, 3)}


def monomials(p):
    return st.tuples(st.integers(0, 4), st.integers(-2 * p, 2 * p)).flatmap(
        lambda dm: st.sampled_from(partitions(dm[0])).map(lambda lam: FockVector.monomial(lam, dm[1]))
    )


def test_partition_counts():
    # OEIS A000041
    assert [len(partitions(n)) for n in range(10)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_heisenberg_commutator(p, data):
    L = LAT[p]
    v = data.draw(monomials(p))
    m = data.draw(st.integers(-3, 3))
    n = data.draw(st.integers(-3, 3))
    lhs = L.heis_mode(m, L.heis_mode(n, v)) - L.heis_mode(n, L.heis_mode(m, v))
    rhs = v * (2 * p * m) if m + n == 0 else FockVector.zero()
    assert lhs == rhs


@pytest.mark.parametrize("p", [2, 3])
@given(data=st.data())
def test_L0_is_degree(p, data):
    L = LAT[p]
    v = data.draw(monomials(p))
    (key,) = v.keys()
    assert L.virasoro_mode(0, v) == v * L.degree(key)


@pytest.mark.parametrize("p", [2, 3])
@settings(max_examples=25)
@given(data=st.data())
def test_virasoro_algebra(p, data):
    L = LAT[p]
    c = central_charge(p)
    v = data.draw(monomials(p))
    m = data.draw(st.integers(-2, 2))
    n = data.draw(st.integers(-2, 2))
    lhs = L.virasoro_mode(m, L.virasoro_mode(n, v)) - L.virasoro_mode(n, L.virasoro_mode(m, v))
    rhs = L.virasoro_mode(m + n, v) * (m - n)
    if m + n == 0:
        rhs = rhs + v * (c / 12 * (m ** 3 - m))
    assert lhs == rhs


@pytest.mark.parametrize("p", [2, 3])
@settings(max_examples=25)
@given(data=st.data())
def test_screening_commutes_with_virasoro(p, data):
    L = LAT[p]
    v = data.draw(monomials(p))
    n = data.draw(st.integers(-2, 2))
    assert L.Q(L.virasoro_mode(n, v)) == L.virasoro_mode(n, L.Q(v))


def test_central_charge_values():
    assert central_charge(2) == -2
    assert central_charge(3) == -7
    assert LAT[2].central_charge == -2


@pytest.mark.parametrize("p", [2, 3])
def test_exp_product(p):
    L = LAT[p]
    tp = 2 * p
    f = L.exp_vector(-tp)
    for n in range(-tp, tp + 1):
        assert L.exp_mode(-tp, n, f).is_zero()
    assert L.exp_mode(-tp, -tp - 1, f) == L.exp_vector(-2 * tp)
    # next mode down carries one alpha(-1)
    assert L.exp_mode(-tp, -tp - 2, f) == FockVector.monomial((1,), -2 * tp) * -1


@pytest.mark.parametrize("p", [2, 3])
def test_efh_relations(p):
    L = LAT[p]
    E, F, H = (L.generator(x) for x in "EFH")
    for i in range(-2 * p, 2 * p + 1):
        assert L.triplet_mode("E", i, E).is_zero()
        assert L.triplet_mode("F", i, F).is_zero()
        assert L.Q(L.triplet_mode("H", i, H)).is_zero()


@pytest.mark.parametrize("p", [2, 3])
def test_f_lowering(p):
    L = LAT[p]
    tp = 2 * p
    for n in (1, 2):
        assert L.triplet_mode("F", -(n * tp + 1), L.exp_vector(-n * tp)) == L.exp_vector(-(n + 1) * tp)


@pytest.mark.parametrize("p", [2, 3])
def test_generators(p):
    L = LAT[p]
    for x in ("omega", "E", "F", "H"):
        assert L.Qt(L.generator(x)).is_zero()
    for x in "EFH":
        v = L.generator(x)
        assert L.check_singular(v, 2 * p - 1)
        assert L.Q(L.Q(L.Q(L.generator("F")))).is_zero()
    assert L.check_singular(L.vacuum(), 0)
    assert L.virasoro_mode(-2, L.vacuum()) == L.omega()


@pytest.mark.parametrize("p", [2, 3])
def test_field_mode_agrees_with_commutator_route(p):
    L = LAT[p]
    H = L.generator("H")
    for v in (L.vacuum(), L.heis_mode(-1, L.exp_vector(-2 * p)), L.exp_vector(2 * p)):
        for n in range(2 * p - 5, 2 * p + 1):
            assert L.field_mode(H, n, v) == L.triplet_mode("H", n, v)


def test_field_mode_of_omega_is_virasoro():
    L = LAT[2]
    v = L.heis_mode(-2, L.exp_vector(1))
    for n in range(-2, 3):
        assert L.field_mode(L.omega(), n + 1, v) == L.virasoro_mode(n, v)


def test_incompatible_mode_index():
    L = LAT[2]
    with pytest.raises(IncompatibleModeIndex):
        L.Qt(L.exp_vector(1))
    with pytest.raises(IncompatibleModeIndex):
        L.field_mode(L.exp_vector(-2), 0, L.exp_vector(1))


@pytest.mark.parametrize("p", [2, 3])
def test_singular_families(p):
    L = LAT[p]
    for i in range(2 * p):
        for n in range(0 if i < p else 1, 2):
            v = L.gamma(i - 2 * p * n)
            h = weight_h(i + 1, 2 * n + 1, p)
            jmax = 2 * n if i < p else 2 * n - 1
            for _ in range(jmax + 1):
                assert L.check_singular(v, h)
                v = L.Q(v)
            assert v.is_zero()


def test_kernel_dims_methods_agree():
    L = LAT[2]
    for d in range(7):
        assert L.kernel_dim_Qtilde(d, "exact") == L.kernel_dim_Qtilde(d, "modular")
    with pytest.raises(ValueError):
        L.kernel_dim_Qtilde(1, "bogus")


def test_kernel_basis_is_annihilated():
    L = LAT[2]
    basis = L.kernel_basis_Qtilde(4)
    assert len(basis) == L.kernel_dim_Qtilde(4)
    for v in basis:
        assert L.Qt(v).is_zero()


def test_graded_dim_is_a_partition_count():
    L = LAT[2]
    # only charge 0 contributes at low degree in the root lattice for p = 2
    assert L.charges_in_class(0, 0) == [0, 2] or L.charges_in_class(0, 0) == [0]
    assert L.graded_dim(0, 3) == sum(len(partitions(3 - int(L.charge_degree(m)))) for m in L.charges_in_class(0, 3) if L.charge_degree(m).denominator == 1)


def test_vector_algebra():
    a = FockVector.monomial((2, 1), 3, Fraction(1, 2))
    b = FockVector.monomial((2, 1), 3, Fraction(-1, 2))
    assert (a + b).is_zero()
    assert (a * 3).proportionality(a) == 3
    assert a.proportionality(FockVector.monomial((1,), 3)) is None
    assert a.coefficient((2, 1), 3) == Fraction(1, 2)
    assert (a * 0).is_zero()


def test_lattice_rejects_small_p():
    with pytest.raises(ValueError):
        Lattice(1)
