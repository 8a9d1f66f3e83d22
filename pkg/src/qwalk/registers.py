"""Layout of the two-vertex-register-plus-flag space used by the coined and Trotter walks.

A state over H_{2^n} (x) H_{2^n} (x) H_2 is a flat complex vector of length
2^(2n+1). Basis state |x, y, b> sits at index (x * 2^n + y) * 2 + b, so a
reshape to (2^n, 2^n, 2) exposes the registers as array axes.
"""

from __future__ import annotations

import numpy as np


def state_dim(qubits: int) -> int:
    return 1 << (2 * qubits + 1)


def qubits_of(psi: np.ndarray) -> int:
    size = psi.size
    bits = size.bit_length() - 1
    if size != 1 << bits or bits % 2 != 1:
        raise ValueError(f"length {size} is not 2^(2n+1)")
    return (bits - 1) // 2


def basis_index(x: int, y: int, b: int, qubits: int) -> int:
    return ((x << qubits) + y) * 2 + b


def basis_state(x: int, y: int, b: int, qubits: int) -> np.ndarray:
    psi = np.zeros(state_dim(qubits), dtype=complex)
    psi[basis_index(x, y, b, qubits)] = 1.0
    return psi


def as_tensor(psi: np.ndarray) -> np.ndarray:
    d = 1 << qubits_of(psi)
    return psi.reshape(d, d, 2)


def flag_probability(psi: np.ndarray) -> float:
    """Probability of finding the flag qubit in |1>."""
    return float(np.sum(np.abs(as_tensor(psi)[:, :, 1]) ** 2))


def padded_mass(psi: np.ndarray, n_vertices: int) -> float:
    """Probability that the position register holds an index >= N."""
    return float(np.sum(np.abs(as_tensor(psi)[n_vertices:]) ** 2))


def embed_vertex_state(phi: np.ndarray, qubits: int) -> np.ndarray:
    """Map sum_x phi_x |x> to sum_x phi_x |x, 0, 0>."""
    psi = np.zeros(state_dim(qubits), dtype=complex)
    as_tensor(psi)[:phi.size, 0, 0] = phi
    return psi


def walk_subspace_component(psi: np.ndarray, n_vertices: int) -> np.ndarray:
    """Amplitudes <x, 0, 0|psi> for x < N."""
    return as_tensor(psi)[:n_vertices, 0, 0].copy()


def ancilla_leakage(psi: np.ndarray, n_vertices: int) -> float:
    """Probability mass outside span{|x, 0, 0> : x < N}."""
    inside = np.sum(np.abs(walk_subspace_component(psi, n_vertices)) ** 2)
    return float(max(0.0, np.sum(np.abs(psi) ** 2) - inside))
