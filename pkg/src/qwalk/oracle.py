"""Graph oracles and query accounting.

The classical oracle returns the single bit A_xy. The quantum oracle O
XORs A_xy into the flag qubit of |x, y, b>, and the combined oracle OSO
swaps the two vertex registers exactly when {x, y} is an edge. Each
application to a state counts as one call however wide the superposition.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .graph import Graph
from .registers import as_tensor, qubits_of


@dataclass
class OracleCounter:
    classical_queries: int = 0
    quantum_calls: int = 0
    oso_calls: int = 0

    def reset(self) -> None:
        self.classical_queries = 0
        self.quantum_calls = 0
        self.oso_calls = 0

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


def classical_query(g: Graph, x: int, y: int, ctr: OracleCounter | None = None) -> int:
    if ctr is not None:
        ctr.classical_queries += 1
    return g.adjacency(x, y)


def oracle_apply(psi: np.ndarray, g: Graph, ctr: OracleCounter | None = None) -> np.ndarray:
    """|x, y, b> -> |x, y, b XOR A_xy>, extended linearly. Returns a new vector."""
    tensor = as_tensor(psi)
    mask = g.padded_adjacency(qubits_of(psi))
    out = tensor.copy()
    out[mask] = tensor[mask][:, ::-1]
    if ctr is not None:
        ctr.quantum_calls += 1
    return out.reshape(-1)


def oso_apply(phi: np.ndarray, g: Graph, ctr: OracleCounter | None = None) -> np.ndarray:
    """|x, y> -> |y, x> if {x, y} is an edge, else unchanged (flag-free oracle)."""
    phi = np.asarray(phi)
    d = int(round(np.sqrt(phi.size)))
    if d * d != phi.size or d & (d - 1):
        raise ValueError(f"length {phi.size} is not 4^n")
    tensor = phi.reshape(d, d)
    mask = g.padded_adjacency(d.bit_length() - 1)
    out = tensor.copy()
    out[mask] = tensor.T[mask]
    if ctr is not None:
        ctr.oso_calls += 1
    return out.reshape(-1)
