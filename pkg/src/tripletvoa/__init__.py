"""Exact computer algebra for the triplet vertex algebra W(p).

Submodules: ``exactmath`` (rationals, polynomials, q-series), ``fock``
(lattice Fock-space model), ``zhu`` (Zhu-algebra polynomials and
idempotents), ``chars`` (characters and modular closure) and ``cli``.
"""

from .exactmath import PolyQ, PuiseuxSeries, Rational
from .fock import FockVector, Lattice
from .report import Check, VerifyReport
from .zhu import ZhuReport, idempotents, q_poly, f_p_poly, weight_h, central_charge

__version__ = "0.1.0"

__all__ = [
    "Rational",
    "PolyQ",
    "PuiseuxSeries",
    "FockVector",
    "Lattice",
    "Check",
    "VerifyReport",
    "ZhuReport",
    "idempotents",
    "q_poly",
    "f_p_poly",
    "weight_h",
    "central_charge",
]
