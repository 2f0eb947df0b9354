from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from tripletvoa.linalg import bareiss_echelon, integer_rows, nullspace_exact, rank_exact


def matrices(max_rows=6, max_cols=6, lo=-4, hi=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@given(matrices())
def test_rank_matches_sympy(rows):
    assert rank_exact(rows) == sympy.Matrix(rows).rank()


@given(matrices(lo=-2, hi=2))
def test_low_rank_products(rows):
    # products through a thin middle dimension have small rank
    m = sympy.Matrix(rows)
    prod = m * m.T
    assert rank_exact(prod.tolist()) == m.rank()


@given(matrices())
def test_nullspace_contract(rows):
    ncols = len(rows[0])
    basis = nullspace_exact(rows, ncols)
    assert len(basis) == ncols - rank_exact(rows)
    for x in basis:
        for r in rows:
            assert sum(Fraction(a) * b for a, b in zip(r, x)) == 0
    if basis:
        assert sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in x] for x in basis]).rank() == len(basis)


def test_rational_rows_are_scaled():
    rows = integer_rows([[Fraction(1, 2), Fraction(1, 3)], [2, 4]])
    assert rows == [[3, 2], [2, 4]]


def test_echelon_pivots_skip_zero_columns():
    ech, piv = bareiss_echelon([[0, 1, 2], [0, 2, 4], [0, 0, 1]])
    assert piv == [1, 2]


def test_empty():
    assert rank_exact([]) == 0
    assert nullspace_exact([], 2) == [[1, 0], [0, 1]]
