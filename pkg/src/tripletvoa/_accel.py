"""Numeric kernels with a numba path and a pure-numpy fallback.

Set ``TRIPLETVOA_DISABLE_NUMBA=1`` (or run without numba installed) to use
the numpy implementations.  Both paths compute the same thing; the exact
symbolic code never goes through here.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("TRIPLETVOA_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError
    import numba

    njit = numba.njit
    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


# primes below 2**31 keep every product inside int64
DEFAULT_PRIME = 2147483629


@njit(cache=True)
def _rank_mod_numba(a, prime):
    m = a.copy()
    nrows, ncols = m.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if m[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                tmp = m[r, j]
                m[r, j] = m[piv, j]
                m[piv, j] = tmp
        # inverse by Fermat
        inv = 1
        base = m[r, c]
        e = prime - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % prime
            base = (base * base) % prime
            e >>= 1
        for j in range(c, ncols):
            m[r, j] = (m[r, j] * inv) % prime
        for i in range(r + 1, nrows):
            f = m[i, c]
            if f != 0:
                for j in range(c, ncols):
                    m[i, j] = (m[i, j] - f * m[r, j]) % prime
        r += 1
    return r


def _rank_mod_numpy(a: np.ndarray, prime: int) -> int:
    m = a.copy()
    nrows, ncols = m.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), prime - 2, prime)
        m[r, c:] = (m[r, c:] * inv) % prime
        f = m[r + 1:, c].copy()
        rows = np.nonzero(f)[0]
        if rows.size:
            sub = m[r + 1 + rows, c:]
            m[r + 1 + rows, c:] = (sub - (f[rows, None] * m[r, c:][None, :]) % prime) % prime
        r += 1
    return r


def rank_mod_prime(rows, prime: int = DEFAULT_PRIME, use_numba: bool | None = None) -> int:
    """Rank of an integer matrix over GF(prime).

    A lower bound for the rank over Q, equal to it unless ``prime`` divides
    every maximal nonzero minor.
    """
    a = np.array([[int(x) % prime for x in row] for row in rows], dtype=np.int64)
    if a.size == 0:
        return 0
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        return int(_rank_mod_numba(a, np.int64(prime)))
    return _rank_mod_numpy(a, prime)


@njit(cache=True)
def _eval_series_numba(exps, re, im, tau_re, tau_im):
    # sum (re + i im) * exp(2 pi i tau e)
    out_re = 0.0
    out_im = 0.0
    two_pi = 2.0 * np.pi
    for k in range(exps.shape[0]):
        e = exps[k]
        mag = np.exp(-two_pi * tau_im * e)
        ph = two_pi * tau_re * e
        c = np.cos(ph) * mag
        s = np.sin(ph) * mag
        out_re += re[k] * c - im[k] * s
        out_im += re[k] * s + im[k] * c
    return out_re, out_im


def _eval_series_numpy(exps, re, im, tau_re, tau_im):
    z = np.exp(2j * np.pi * complex(tau_re, tau_im) * exps)
    v = np.sum((re + 1j * im) * z)
    return float(v.real), float(v.imag)


def eval_series(exps: np.ndarray, coeffs: np.ndarray, tau: complex, use_numba: bool | None = None) -> complex:
    """Evaluate ``sum coeffs[k] * exp(2 pi i tau exps[k])`` in double precision."""
    exps = np.ascontiguousarray(exps, dtype=np.float64)
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    re = np.ascontiguousarray(coeffs.real)
    im = np.ascontiguousarray(coeffs.imag)
    if use_numba is None:
        use_numba = HAVE_NUMBA
    fn = _eval_series_numba if (use_numba and HAVE_NUMBA) else _eval_series_numpy
    a, b = fn(exps, re, im, float(tau.real), float(tau.imag))
    return complex(a, b)
