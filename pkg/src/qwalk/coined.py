"""Discrete-time coined quantum walk on a general graph.

One step is O S O C: toss the coin on the y register, write A_xy into
the flag with the oracle, swap the vertex registers when the flag is set,
then clear the flag with a second oracle call.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .graph import Graph
from .linalg import unitarity_defect
from .oracle import OracleCounter, oracle_apply
from .registers import as_tensor, basis_state, qubits_of

COIN_KINDS = ("hadamard_per_qubit", "grover_diffusion", "dft", "custom")
UNITARY_TOL = 1e-12


def hadamard_matrix(qubits: int) -> np.ndarray:
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    out = np.ones((1, 1))
    for _ in range(qubits):
        out = np.kron(out, h)
    return out


def grover_matrix(qubits: int) -> np.ndarray:
    d = 1 << qubits
    return np.full((d, d), 2.0 / d) - np.eye(d)


def dft_matrix(qubits: int) -> np.ndarray:
    d = 1 << qubits
    k = np.arange(d)
    return np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)


@dataclass(frozen=True)
class Coin:
    """Unitary acting on the y register.

    ``matrix`` is either one 2^n x 2^n unitary, or, for a position-conditioned
    coin, an array of shape (2^n, 2^n, 2^n) holding one unitary per x.
    """

    kind: str
    matrix: np.ndarray
    conditioned: bool = False

    @property
    def qubits(self) -> int:
        return self.matrix.shape[-1].bit_length() - 1

    @classmethod
    def hadamard(cls, qubits: int) -> "Coin":
        return cls("hadamard_per_qubit", hadamard_matrix(qubits))

    @classmethod
    def grover(cls, qubits: int) -> "Coin":
        return cls("grover_diffusion", grover_matrix(qubits))

    @classmethod
    def dft(cls, qubits: int) -> "Coin":
        return cls("dft", dft_matrix(qubits))

    @classmethod
    def custom(cls, unitary) -> "Coin":
        u = np.asarray(unitary, dtype=complex)
        d = u.shape[0]
        if u.shape != (d, d) or d & (d - 1):
            raise ValueError(f"custom coin must be 2^n x 2^n, got shape {u.shape}")
        defect = unitarity_defect(u)
        if defect > UNITARY_TOL:
            raise ValueError(f"custom coin is not unitary (defect {defect:.3e})")
        return cls("custom", u)

    @classmethod
    def conditioned_on_position(cls, unitaries: Sequence, qubits: int) -> "Coin":
        """One coin per vertex x < len(unitaries); padded positions get the identity."""
        d = 1 << qubits
        if len(unitaries) > d:
            raise ValueError(f"{len(unitaries)} coins for a register of {d} positions")
        stack = np.tile(np.eye(d, dtype=complex), (d, 1, 1))
        for x, u in enumerate(unitaries):
            u = np.asarray(u, dtype=complex)
            if u.shape != (d, d):
                raise ValueError(f"coin for x={x} has shape {u.shape}, expected {(d, d)}")
            defect = unitarity_defect(u)
            if defect > UNITARY_TOL:
                raise ValueError(f"coin for x={x} is not unitary (defect {defect:.3e})")
            stack[x] = u
        return cls("custom", stack, conditioned=True)

    @classmethod
    def named(cls, kind: str, qubits: int) -> "Coin":
        kind = kind.replace("-", "_")
        if kind in ("hadamard", "hadamard_per_qubit"):
            return cls.hadamard(qubits)
        if kind in ("grover", "grover_diffusion"):
            return cls.grover(qubits)
        if kind == "dft":
            return cls.dft(qubits)
        raise ValueError(f"unknown coin kind {kind!r}")


def initial_state(x0: int, qubits: int) -> np.ndarray:
    """|x0, 0, 0>."""
    if not 0 <= x0 < 1 << qubits:
        raise ValueError(f"start vertex {x0} does not fit in {qubits} qubits")
    return basis_state(x0, 0, 0, qubits)


def coin_apply(psi: np.ndarray, coin: Coin) -> np.ndarray:
    tensor = as_tensor(psi)
    if coin.qubits != qubits_of(psi):
        raise ValueError(f"coin on {coin.qubits} qubits, state registers have {qubits_of(psi)}")
    if coin.conditioned:
        out = np.einsum("xyz,xzb->xyb", coin.matrix, tensor)
    else:
        out = np.einsum("yz,xzb->xyb", coin.matrix, tensor)
    return out.reshape(-1)


def swap_apply(psi: np.ndarray) -> np.ndarray:
    """|x, y, 1> -> |y, x, 1>, |x, y, 0> unchanged.

    Done the way the circuit does it: one Fredkin gate per qubit position k,
    controlled on the flag, exchanging bit k of x with bit k of y.
    """
    n = qubits_of(psi)
    out = psi.astype(complex, copy=True)
    # axes: x bits (msb first), y bits, flag
    bits = out.reshape((2,) * (2 * n + 1))
    flagged = bits[..., 1]
    for k in range(n):
        flagged = np.swapaxes(flagged, k, n + k)
    bits[..., 1] = flagged.copy()
    return bits.reshape(-1)


def step(psi: np.ndarray, g: Graph, coin: Coin, ctr: OracleCounter | None = None) -> np.ndarray:
    """psi(t+1) = O S O C psi(t)."""
    psi = coin_apply(psi, coin)
    psi = oracle_apply(psi, g, ctr)
    psi = swap_apply(psi)
    return oracle_apply(psi, g, ctr)


def iterate(psi0: np.ndarray, g: Graph, coin: Coin, steps: int,
            ctr: OracleCounter | None = None) -> Iterator[np.ndarray]:
    """Yield psi(0), psi(1), ..., psi(steps)."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    psi = psi0
    yield psi
    for _ in range(steps):
        psi = step(psi, g, coin, ctr)
        yield psi


def run(x0: int, g: Graph, coin: Coin, steps: int, ctr: OracleCounter | None = None) -> np.ndarray:
    if not 0 <= x0 < g.n:
        raise ValueError(f"start vertex {x0} outside [0, {g.n - 1}]")
    psi = initial_state(x0, g.qubits)
    for psi in iterate(psi, g, coin, steps, ctr):
        pass
    return psi


def position_distribution(psi: np.ndarray, n_vertices: int) -> np.ndarray:
    """P(x) = sum_{y,b} |<x, y, b|psi>|^2 for x < N."""
    probs = np.sum(np.abs(as_tensor(psi)) ** 2, axis=(1, 2))
    return probs[:n_vertices]


class NaiveOperator(NamedTuple):
    matrix: np.ndarray
    unitarity_defect: float


def naive_adjacency_operator(g: Graph, alpha: float,
                             phases: dict[tuple[int, int], float] | None = None) -> NaiveOperator:
    """The direct quantization of the classical update, with phased adjacency entries.

    M_xy = (alpha/N) exp(i phi_xy) A_xy + (1 - alpha d_x / N) delta_xy.
    A phase given only for (x, y) is reused for (y, x). This operator is
    generally not unitary; the defect is reported alongside it.
    """
    n = g.n
    phases = phases or {}
    m = np.diag(1.0 - alpha * g.degrees / n).astype(complex)
    for x, y in g.edges:
        phi_xy = phases.get((x, y), phases.get((y, x), 0.0))
        phi_yx = phases.get((y, x), phi_xy)
        m[x, y] += alpha / n * np.exp(1j * phi_xy)
        m[y, x] += alpha / n * np.exp(1j * phi_yx)
    return NaiveOperator(m, unitarity_defect(m))
