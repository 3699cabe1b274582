"""Dense symmetric kernels: eigendecomposition, SPD square root and inverse.

All routines work in double precision on plain numpy arrays. The
eigendecomposition is delegated to LAPACK via numpy; the square roots are
spectral functions built on top of it.
"""
from __future__ import annotations

import numpy as np

from .errors import InputError, NumericError

__all__ = ["symmetric_eig", "spd_sqrt", "spd_inv_sqrt"]

DEFAULT_EIG_FLOOR = 1e-10


def _check_symmetric(m: np.ndarray, tol: float) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("matrix contains non-finite entries")
    if m.size and np.max(np.abs(m - m.T)) > tol:
        raise InputError(f"matrix is not symmetric within tolerance {tol}")
    return m


def symmetric_eig(m: np.ndarray, symmetry_tol: float = 1e-8):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric m."""
    m = _check_symmetric(m, symmetry_tol)
    try:
        lam, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition failed: {exc}") from exc
    return lam, v


def spd_sqrt(m: np.ndarray, eig_floor: float = DEFAULT_EIG_FLOOR) -> np.ndarray:
    """Principal square root of a symmetric PSD matrix.

    Eigenvalues in [-eig_floor, 0) are treated as roundoff zeros; anything
    below -eig_floor signals a non-PSD input.
    """
    lam, v = symmetric_eig(m)
    if lam.size and lam[0] < -eig_floor:
        raise InputError(f"matrix is not PSD: smallest eigenvalue {lam[0]:.3e}")
    return (v * np.sqrt(np.maximum(lam, 0.0))) @ v.T


def spd_inv_sqrt(m: np.ndarray, eig_floor: float = DEFAULT_EIG_FLOOR) -> np.ndarray:
    """Inverse square root with eigenvalues clamped to eig_floor from below."""
    lam, v = symmetric_eig(m)
    if lam.size and lam[0] < -eig_floor:
        raise InputError(f"matrix is not PSD: smallest eigenvalue {lam[0]:.3e}")
    return (v / np.sqrt(np.maximum(lam, eig_floor))) @ v.T
