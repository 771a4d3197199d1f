"""Vectorized exp-map / SLERP kernels for arrays of sphere points.

Rays and director-curve nodes evolve independently, so the wavefront and
p-harmonic solvers step whole (n, 3) arrays at once.  These kernels apply the
same formulas as :mod:`sphererk.geometry` rowwise; the test suite checks
parity against the scalar versions.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import AntipodalPointsError

SMALL_ANGLE = 1e-8


def normalize_rows(x: np.ndarray) -> np.ndarray:
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def exp_rows(p: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Rowwise exponential map cos(|s|) p + sin(|s|) s/|s|."""
    n = np.linalg.norm(s, axis=-1, keepdims=True)
    small = n < SMALL_ANGLE
    safe = np.where(small, 1.0, n)
    sinc = np.where(small, 1.0 - n * n / 6.0, np.sin(safe) / safe)
    return np.cos(n) * p + sinc * s


def slerp_rows(p: np.ndarray, q: np.ndarray, t: float) -> np.ndarray:
    """Rowwise SLERP at a common parameter t."""
    c = np.cross(p, q)
    omega = np.arctan2(np.linalg.norm(c, axis=-1), np.sum(p * q, axis=-1))
    if np.any(omega > math.pi - 1e-8):
        raise AntipodalPointsError("slerp rows contain an antipodal pair")
    omega = omega[..., None]
    small = omega < SMALL_ANGLE
    safe = np.where(small, 1.0, omega)
    a = np.where(small, 1.0 - t, np.sin((1.0 - t) * safe) / np.sin(safe))
    b = np.where(small, t, np.sin(t * safe) / np.sin(safe))
    out = a * p + b * q
    # nlerp rows need renormalizing; the sine form is already unit.
    if np.any(small):
        idx = small[..., 0]
        out[idx] = normalize_rows(out[idx])
    return out
