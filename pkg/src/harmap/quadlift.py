"""Coefficient-matrix views of lifts for vectorized float evaluation.

A lift component becomes a complex matrix C with C[i, j] the coefficient
of z^i zbar^j; holomorphic components are single-column matrices.  The
float Gauss lift mirrors the exact construction <p,p> p' - <p',p> p for
paths whose interior points only exist in floating point.
"""

from __future__ import annotations

import numpy as np

from .exact import BiPoly, Poly


def coeff_matrix(component) -> np.ndarray:
    """Complex coefficient matrix of a BiPoly, Poly, or array-like."""
    if isinstance(component, BiPoly):
        if component.is_zero:
            return np.zeros((1, 1), complex)
        D, E = component.degrees()
        out = np.zeros((D + 1, E + 1), complex)
        for (i, j), c in component.terms.items():
            out[i, j] = c.to_complex()
        return out
    if isinstance(component, Poly):
        if component.is_zero:
            return np.zeros((1, 1), complex)
        return np.array([[c.to_complex()] for c in component.coeffs])
    arr = np.asarray(component, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError("lift component must be 1- or 2-dimensional")
    return arr


def _trim(C: np.ndarray, rel: float = 1e-14) -> np.ndarray:
    mags = np.abs(C)
    top = mags.max() if mags.size else 0.0
    if top == 0.0:
        return np.zeros((1, 1), complex)
    rows = np.where(mags.max(axis=1) > rel * top)[0]
    cols = np.where(mags.max(axis=0) > rel * top)[0]
    return C[: rows.max() + 1, : cols.max() + 1].copy()


def lift_matrices(lift) -> list[np.ndarray]:
    """Three trimmed coefficient matrices for a lift triple."""
    if len(lift) != 3:
        raise ValueError("a lift has exactly three components")
    mats = [_trim(coeff_matrix(c)) for c in lift]
    if all(np.abs(C).max() == 0.0 for C in mats):
        raise ValueError("lift is identically zero")
    return mats


def _shift_mul(A: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Multiply a bipoly matrix by a z-polynomial coefficient vector."""
    out = np.zeros((A.shape[0] + len(v) - 1, A.shape[1]), complex)
    for i, c in enumerate(v):
        if c != 0:
            out[i : i + A.shape[0], :] += c * A
    return out


def gauss_lift_matrices(p: np.ndarray) -> list[np.ndarray]:
    """Float Gauss lift <p,p> p' - <p',p> p from a (3, k+1) coefficient array."""
    p = np.asarray(p, dtype=complex)
    if p.ndim != 2 or p.shape[0] != 3:
        raise ValueError("expected a (3, k+1) coefficient array")
    k1 = p.shape[1]
    dp = np.zeros_like(p)
    if k1 > 1:
        dp[:, : k1 - 1] = p[:, 1:] * np.arange(1, k1)[None, :]
    pairing = sum(np.outer(p[i], np.conj(p[i])) for i in range(3))
    dpairing = sum(np.outer(dp[i], np.conj(p[i])) for i in range(3))
    return [_shift_mul(pairing, dp[i]) - _shift_mul(dpairing, p[i]) for i in range(3)]
