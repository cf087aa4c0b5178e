"""Vectorized numeric evaluation of bivariate rational data on point arrays.

The hot loop (sparse bivariate polynomial evaluation over large complex
grids) has a numba @njit implementation and a pure-numpy fallback.  The
backend is chosen once at import time from the ``WILLMORE_KERNELS``
environment variable: ``numba`` (default when numba imports) or ``numpy``.
"""

from __future__ import annotations

import os

import numpy as np

_BACKEND = os.environ.get("WILLMORE_KERNELS", "numba").strip().lower()
if _BACKEND not in ("numba", "numpy"):
    raise ValueError(f"WILLMORE_KERNELS must be 'numba' or 'numpy', "
                     f"got {_BACKEND!r}")

if _BACKEND == "numba":
    try:
        import numba
    except ImportError:  # pragma: no cover - environment without numba
        _BACKEND = "numpy"


def backend() -> str:
    return _BACKEND


def _eval_terms_numpy(iexp: np.ndarray, jexp: np.ndarray, coef: np.ndarray,
                      z: np.ndarray, zb: np.ndarray) -> np.ndarray:
    imax = int(iexp.max(initial=0))
    jmax = int(jexp.max(initial=0))
    zp = np.empty((imax + 1,) + z.shape, dtype=complex)
    zbp = np.empty((jmax + 1,) + z.shape, dtype=complex)
    zp[0] = 1.0
    zbp[0] = 1.0
    for k in range(1, imax + 1):
        zp[k] = zp[k - 1] * z
    for k in range(1, jmax + 1):
        zbp[k] = zbp[k - 1] * zb
    out = np.zeros(z.shape, dtype=complex)
    for i, j, c in zip(iexp, jexp, coef):
        out += c * zp[i] * zbp[j]
    return out


if _BACKEND == "numba":
    @numba.njit(cache=True, fastmath=False)
    def _eval_terms_njit(iexp, jexp, coef, z, zb):  # pragma: no cover - jit
        n = z.shape[0]
        m = iexp.shape[0]
        out = np.zeros(n, dtype=np.complex128)
        for p in range(n):
            zp = z[p]
            zbp = zb[p]
            acc = 0.0 + 0.0j
            for t in range(m):
                v = coef[t]
                e = iexp[t]
                w = zp
                r = 1.0 + 0.0j
                while e:
                    if e & 1:
                        r *= w
                    w *= w
                    e >>= 1
                e = jexp[t]
                w = zbp
                while e:
                    if e & 1:
                        r *= w
                    w *= w
                    e >>= 1
                acc += v * r
            out[p] = acc
        return out


def bipoly_grid(p, z: np.ndarray, zb: np.ndarray | None = None) -> np.ndarray:
    """Evaluate a BiPoly on an array of points (zb defaults to conj(z))."""
    z = np.asarray(z, dtype=complex)
    if zb is None:
        zb = np.conj(z)
    terms = p.numeric_terms()
    if not terms:
        return np.zeros(z.shape, dtype=complex)
    iexp = np.array([t[0] for t in terms], dtype=np.int64)
    jexp = np.array([t[1] for t in terms], dtype=np.int64)
    coef = np.array([t[2] for t in terms], dtype=complex)
    if _BACKEND == "numba":
        flat = _eval_terms_njit(iexp, jexp, coef, z.ravel(), zb.ravel())
        return flat.reshape(z.shape)
    return _eval_terms_numpy(iexp, jexp, coef, z, zb)


def birat_grid(r, z: np.ndarray, zb: np.ndarray | None = None) -> np.ndarray:
    """Evaluate a BiRat on an array of points (zb defaults to conj(z))."""
    z = np.asarray(z, dtype=complex)
    if zb is None:
        zb = np.conj(z)
    num = bipoly_grid(r.num, z, zb)
    for f, e in r.den_factors.items():
        num = num / bipoly_grid(f, z, zb) ** e
    return num
