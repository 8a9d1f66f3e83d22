"""Dense complex linear algebra shared by the walk engines."""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-12


def hermiticity_defect(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def unitarity_defect(m: np.ndarray) -> float:
    """max |(M^dagger M - I)_ij|."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    gram = m.conj().T @ m
    return float(np.max(np.abs(gram - np.eye(m.shape[0])))) if m.size else 0.0


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """|<u|v>| for unit vectors; insensitive to a global phase."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch {u.shape} vs {v.shape}")
    return float(min(1.0, abs(np.vdot(u, v))))


class SpectralPropagator:
    """exp(-iHt) for a fixed Hermitian H, from one full eigendecomposition.

    Reuse one instance when evolving the same Hamiltonian to many times.
    """

    def __init__(self, h: np.ndarray, tol: float = HERMITIAN_TOL):
        h = np.asarray(h)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {h.shape}")
        defect = hermiticity_defect(h)
        if defect > tol:
            raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
        self.dim = h.shape[0]
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(h)

    def apply(self, t: float, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.dim,):
            raise ValueError(f"vector of shape {v.shape} does not match dimension {self.dim}")
        coeffs = self.eigenvectors.conj().T @ v
        return self.eigenvectors @ (np.exp(-1j * self.eigenvalues * t) * coeffs)

    def matrix(self, t: float) -> np.ndarray:
        phases = np.exp(-1j * self.eigenvalues * t)
        return (self.eigenvectors * phases) @ self.eigenvectors.conj().T

    def reconstruct(self) -> np.ndarray:
        """sum_k lambda_k P_k, the spectral reconstruction of H."""
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


def expm_apply_hermitian(h: np.ndarray, t: float, v: np.ndarray) -> np.ndarray:
    """Return exp(-i H t) v using the eigendecomposition of Hermitian H."""
    return SpectralPropagator(h).apply(t, v)


def dense_operator(apply, dim: int) -> np.ndarray:
    """Materialize a linear map given as a function on vectors, column by column."""
    cols = []
    for k in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[k] = 1.0
        cols.append(apply(e))
    return np.stack(cols, axis=1)
