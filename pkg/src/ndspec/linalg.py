"""Dense complex Hermitian factorization, inversion, and congruence products.

Matrices are plain numpy arrays; Hermitian inputs are read from the
lower triangle, and Hermitian outputs are explicitly symmetrized so
asymmetry cannot drift across repeated stages.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NotPositiveDefinite, SizeMismatch

# Pivot floor relative to the largest diagonal entry.
PD_PIVOT_REL = 1e-12


def _square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SizeMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def hermitianize(m) -> np.ndarray:
    """(A + A^H) / 2 with an exactly real diagonal."""
    a = _square(m)
    out = 0.5 * (a + a.conj().T)
    np.fill_diagonal(out, out.diagonal().real)
    return out


def cholesky(h, pivot_floor: float | None = None) -> np.ndarray:
    """Lower Cholesky factor of a Hermitian positive definite matrix.

    Only the lower triangle of ``h`` is read. Each pivot is checked
    against a floor (by default 1e-12 times the largest diagonal entry);
    the index of the failing pivot is reported on NotPositiveDefinite.
    """
    a = _square(h).copy()
    n = a.shape[0]
    if pivot_floor is None:
        diag_max = float(np.max(a.diagonal().real, initial=0.0))
        pivot_floor = PD_PIVOT_REL * diag_max
    lower = np.zeros_like(a)
    for k in range(n):
        pivot = a[k, k].real
        if pivot <= pivot_floor:
            raise NotPositiveDefinite(
                f"pivot {k} is {pivot:.6g} (floor {pivot_floor:.6g})",
                pivot_index=k, pivot_value=pivot,
            )
        root = math.sqrt(pivot)
        lower[k, k] = root
        if k + 1 < n:
            col = a[k + 1:, k] / root
            lower[k + 1:, k] = col
            a[k + 1:, k + 1:] -= np.outer(col, col.conj())
    return lower


def invert_pd(h) -> np.ndarray:
    """Inverse of a Hermitian positive definite matrix.

    Cholesky factorization followed by a triangular solve against the
    identity; the result is symmetrized to exact Hermitian form.
    """
    lower = cholesky(h)
    n = lower.shape[0]
    linv = solve_triangular(lower, np.eye(n, dtype=complex), lower=True)
    return hermitianize(linv.conj().T @ linv)


def sandwich(m, h_inv) -> np.ndarray:
    """Congruence product m @ h_inv @ m^H, symmetrized to exact Hermitian.

    Positive semi-definite whenever ``h_inv`` is.
    """
    a = _square(m)
    b = _square(h_inv)
    if a.shape[0] != b.shape[0]:
        raise SizeMismatch(f"factor sizes {a.shape[0]} and {b.shape[0]} do not agree")
    return hermitianize(a @ b @ a.conj().T)
