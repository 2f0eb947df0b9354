"""Exact linear algebra over Q via fraction-free (Bareiss) elimination."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

__all__ = [
    "integer_rows",
    "bareiss_echelon",
    "rank_exact",
    "nullspace_exact",
]


def integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    """Scale each row of a rational matrix by the lcm of its denominators."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def bareiss_echelon(mat: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Row echelon form of an integer matrix, computed without fractions.

    Returns the echelon matrix and the list of pivot columns.  Every
    division in the update is exact (entries stay minors of the input).
    """
    m = [list(r) for r in mat]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        pc = prow[c]
        for i in range(r + 1, nrows):
            row = m[i]
            ic = row[c]
            if ic == 0:
                if pc != prev:
                    for j in range(c + 1, ncols):
                        row[j] = (pc * row[j]) // prev
                continue
            for j in range(c + 1, ncols):
                row[j] = (pc * row[j] - ic * prow[j]) // prev
            row[c] = 0
        prev = pc
        pivots.append(c)
        r += 1
    return m, pivots


def rank_exact(rows: Sequence[Sequence]) -> int:
    if not rows or not rows[0]:
        return 0
    return len(bareiss_echelon(integer_rows(rows))[1])


def nullspace_exact(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}`` with one free variable set to 1 per vector."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ech, pivots = bareiss_echelon(integer_rows(rows))
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            row = ech[k]
            s = sum((row[j] * x[j] for j in range(c + 1, ncols) if row[j]), Fraction(0))
            x[c] = -s / row[c]
        basis.append(x)
    return basis
