"""Oracle-based product-formula realization of the continuous-time walk.

Edges are colored by c = (x + y) mod N. For each color the factor

    V_c O exp(-i tau T) O V_c

writes the color-c neighbor into the second register, flags real edges
with the oracle, rotates flagged pairs by exp(-i tau T), unflags, and
erases the neighbor index again. On span{|x, 0, 0>} this is exactly
exp(-i tau H_c) where H_c is the adjacency of the color-c matching, and
sum_c H_c = A, so a product over colors repeated j times approximates
exp(-i gamma A t) to first order in 1/j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .continuous import HamiltonianKind, basis_state, evolve
from .errors import InvariantViolation
from .graph import Graph, color_neighbor
from .linalg import hermiticity_defect
from .oracle import OracleCounter, oracle_apply
from .registers import (ancilla_leakage, as_tensor, embed_vertex_state, qubits_of,
                        state_dim)

ORDERINGS = ("interleaved", "per_color_power")


@dataclass(frozen=True)
class TrotterPlan:
    """gamma, total time t and slice count j.

    ``interleaved`` applies all N color factors in ascending color order once
    per slice, j times. ``per_color_power`` applies color 0's factor j times,
    then color 1's j times, and so on.
    """

    gamma: float
    t: float
    j: int
    ordering: str = "interleaved"

    def __post_init__(self):
        if int(self.j) != self.j or self.j < 1:
            raise ValueError(f"slice count j must be a positive integer, got {self.j}")
        if self.ordering not in ORDERINGS:
            raise ValueError(f"unknown ordering {self.ordering!r}")

    @property
    def tau(self) -> float:
        return self.gamma * self.t / self.j

    def color_count(self, g: Graph) -> int:
        return g.n

    def schedule(self, g: Graph) -> list[int]:
        """Colors in the order their factors act on the state."""
        colors = list(range(self.color_count(g)))
        if self.ordering == "interleaved":
            return colors * self.j
        return [c for c in colors for _ in range(self.j)]


def _neighbor_table(g: Graph, c: int, qubits: int) -> np.ndarray:
    """y_c(x) for every register value x; padded x gets 0 so V_c is the identity there."""
    ys = np.zeros(1 << qubits, dtype=np.int64)
    xs = np.arange(g.n)
    ys[:g.n] = color_neighbor(g.n, c, xs)
    return ys


def v_c_apply(psi: np.ndarray, g: Graph, c: int) -> np.ndarray:
    """|x, z, b> -> |x, z XOR y_c(x), b>."""
    if not 0 <= c < g.n:
        raise ValueError(f"color {c} outside [0, {g.n - 1}]")
    qubits = qubits_of(psi)
    d = 1 << qubits
    ys = _neighbor_table(g, c, qubits)
    src = np.arange(d)[None, :] ^ ys[:, None]
    tensor = as_tensor(psi)
    out = np.take_along_axis(tensor, src[:, :, None], axis=1)
    return out.reshape(-1)


def t_apply(psi: np.ndarray) -> np.ndarray:
    """T|x, y, 1> = |y, x, 1>, T|x, y, 0> = 0."""
    tensor = as_tensor(psi)
    out = np.zeros_like(tensor, dtype=complex)
    out[:, :, 1] = tensor[:, :, 1].T
    return out.reshape(-1)


def t_exp_apply(psi: np.ndarray, tau: float) -> np.ndarray:
    """exp(-i tau T), analytically.

    T vanishes on flag 0 and is the register swap on flag 1, where T^2 = 1,
    so exp(-i tau T) = cos(tau) - i sin(tau) T there.
    """
    tensor = as_tensor(psi).astype(complex, copy=True)
    flagged = tensor[:, :, 1]
    tensor[:, :, 1] = np.cos(tau) * flagged - 1j * np.sin(tau) * flagged.T
    return tensor.reshape(-1)


def color_factor_apply(psi: np.ndarray, g: Graph, c: int, tau_gamma: float,
                       ctr: OracleCounter | None = None) -> np.ndarray:
    """V_c O exp(-i tau T) O V_c, with tau = gamma t / j."""
    psi = v_c_apply(psi, g, c)
    psi = oracle_apply(psi, g, ctr)
    psi = t_exp_apply(psi, tau_gamma)
    psi = oracle_apply(psi, g, ctr)
    return v_c_apply(psi, g, c)


FactorHook = Callable[[int, int, np.ndarray], None]


def trotter_run(g: Graph, x0: int, plan: TrotterPlan, ctr: OracleCounter | None = None,
                on_factor: FactorHook | None = None) -> np.ndarray:
    """Apply the whole product to |x0, 0, 0>.

    ``on_factor(k, c, psi)`` is called after the k-th factor (color c), which
    lets callers check ancilla leakage as the product is built up.
    """
    if not 0 <= x0 < g.n:
        raise ValueError(f"start vertex {x0} outside [0, {g.n - 1}]")
    psi = start_state(g, x0)
    for k, c in enumerate(plan.schedule(g)):
        psi = color_factor_apply(psi, g, c, plan.tau, ctr)
        if on_factor is not None:
            on_factor(k, c, psi)
    return psi


def trotter_slices(g: Graph, x0: int, plan: TrotterPlan, ctr: OracleCounter | None = None,
                   on_factor: FactorHook | None = None) -> Iterator[np.ndarray]:
    """Interleaved product, yielding the state after 0, 1, ..., j slices.

    After k slices the state approximates the exact walk at time k t / j.
    """
    if plan.ordering != "interleaved":
        raise ValueError("slice-wise states only exist for the interleaved ordering")
    if not 0 <= x0 < g.n:
        raise ValueError(f"start vertex {x0} outside [0, {g.n - 1}]")
    psi = start_state(g, x0)
    yield psi
    k = 0
    for _ in range(plan.j):
        for c in range(g.n):
            psi = color_factor_apply(psi, g, c, plan.tau, ctr)
            if on_factor is not None:
                on_factor(k, c, psi)
            k += 1
        yield psi


def trotter_run_regrouped(g: Graph, x0: int, plan: TrotterPlan,
                          ctr: OracleCounter | None = None) -> np.ndarray:
    """Same product with V_{N-1} V_{N-1} inserted up front and neighbors merged.

    The schedule c_0, c_1, ... becomes V_{c_last} [prod_k O e^{-i tau T} O V_{c_k} V_{c_(k-1)}] V_{N-1}
    with c_(-1) = N - 1: every erase V_c is paired with the next write V_c'.
    """
    if not 0 <= x0 < g.n:
        raise ValueError(f"start vertex {x0} outside [0, {g.n - 1}]")
    psi = start_state(g, x0)
    prev = g.n - 1
    psi = v_c_apply(psi, g, prev)
    for c in plan.schedule(g):
        psi = v_c_apply(psi, g, prev)
        psi = v_c_apply(psi, g, c)
        psi = oracle_apply(psi, g, ctr)
        psi = t_exp_apply(psi, plan.tau)
        psi = oracle_apply(psi, g, ctr)
        prev = c
    return v_c_apply(psi, g, prev)


def start_state(g: Graph, x0: int) -> np.ndarray:
    psi = np.zeros(state_dim(g.qubits), dtype=complex)
    as_tensor(psi)[x0, 0, 0] = 1.0
    return psi


def expected_oracle_calls(g: Graph, plan: TrotterPlan) -> int:
    return 2 * g.n * plan.j


# dense verification path


def _permutation_matrix(images: np.ndarray) -> np.ndarray:
    """Matrix sending basis vector k to basis vector images[k]."""
    dim = images.size
    m = np.zeros((dim, dim))
    m[images, np.arange(dim)] = 1.0
    return m


def dense_operators(g: Graph, qubits: int | None = None) -> dict:
    """O, T and every V_c as explicit matrices, built from their basis actions."""
    if qubits is None:
        qubits = g.qubits
    d = 1 << qubits
    x, y, b = np.meshgrid(np.arange(d), np.arange(d), np.arange(2), indexing="ij")
    x, y, b = x.ravel(), y.ravel(), b.ravel()

    def index(xx, yy, bb):
        return (xx * d + yy) * 2 + bb

    mask = g.padded_adjacency(qubits)
    o = _permutation_matrix(index(x, y, b ^ mask[x, y]))
    t = np.zeros((x.size, x.size))
    flagged = b == 1
    t[index(y, x, b)[flagged], np.flatnonzero(flagged)] = 1.0
    v = []
    for c in range(g.n):
        ys = _neighbor_table(g, c, qubits)
        v.append(_permutation_matrix(index(x, y ^ ys[x], b)))
    return {"O": o, "T": t, "V": v}


def build_hamiltonian_dense(g: Graph, gamma: float, max_vertices: int = 8) -> np.ndarray:
    """gamma sum_c V_c O T O V_c over the full register space (small N only).

    With P_c = O V_c a permutation, each term is P_c^T T P_c, so the matrix
    is assembled by chasing basis indices instead of multiplying matrices.
    """
    if g.n > max_vertices:
        raise ValueError(f"dense Hamiltonian limited to N <= {max_vertices}, got {g.n}")
    qubits = g.qubits
    d = 1 << qubits
    x, y, b = np.meshgrid(np.arange(d), np.arange(d), np.arange(2), indexing="ij")
    x, y, b = x.ravel(), y.ravel(), b.ravel()
    mask = g.padded_adjacency(qubits)
    h = np.zeros((x.size, x.size))
    cols = np.arange(x.size)
    for c in range(g.n):
        ys = _neighbor_table(g, c, qubits)
        # P_c |x, y, b> = |x, y', b XOR A[x, y']> with y' = y XOR y_c(x)
        y1 = y ^ ys[x]
        b1 = b ^ mask[x, y1]
        live = b1 == 1
        # T swaps the registers of flagged states, then P_c^T = V_c O maps back
        x2, y2 = y1[live], x[live]
        b2 = 1 ^ mask[x2, y2]
        y3 = y2 ^ ys[x2]
        rows = (x2 * d + y3) * 2 + b2
        np.add.at(h, (rows, cols[live]), 1.0)
    return gamma * h


def restrict_to_walk_subspace(h: np.ndarray, g: Graph) -> np.ndarray:
    """The N x N block <y, 0, 0| H |x, 0, 0>."""
    idx = np.arange(g.n) * (1 << g.qubits) * 2
    return h[np.ix_(idx, idx)]


def hamiltonian_report(g: Graph, gamma: float) -> dict:
    h = build_hamiltonian_dense(g, gamma)
    block = restrict_to_walk_subspace(h, g)
    idx = np.arange(g.n) * (1 << g.qubits) * 2
    outside = np.setdiff1d(np.arange(h.shape[0]), idx)
    spectrum = np.sort(np.linalg.eigvalsh(block))
    expected = np.sort(np.linalg.eigvalsh(gamma * g.adjacency_matrix()))
    return {
        "n": g.n,
        "dim": int(h.shape[0]),
        "gamma": gamma,
        "hermiticity_defect": hermiticity_defect(h),
        "max_block_error": float(np.max(np.abs(block - gamma * g.adjacency_matrix()))),
        "subspace_leak": float(np.max(np.abs(h[np.ix_(outside, idx)]))) if outside.size else 0.0,
        "max_spectrum_error": float(np.max(np.abs(spectrum - expected))),
    }


def exact_reference(g: Graph, x0: int, gamma: float, t: float) -> np.ndarray:
    """exp(-i gamma A t)|x0> embedded as |., 0, 0> in the register space."""
    phi = evolve(g, basis_state(g.n, x0), HamiltonianKind("adjacency", gamma), t)
    return embed_vertex_state(phi, g.qubits)


def trotter_error(g: Graph, x0: int, plan: TrotterPlan, reference: np.ndarray | None = None,
                  ctr: OracleCounter | None = None) -> float:
    if reference is None:
        reference = exact_reference(g, x0, plan.gamma, plan.t)
    return float(np.linalg.norm(trotter_run(g, x0, plan, ctr) - reference))


def convergence_sweep(g: Graph, x0: int, gamma: float, t: float, js,
                      ordering: str = "interleaved") -> list[dict]:
    """Rows (j, error, oracle_calls) comparing the product to the exact walk."""
    reference = exact_reference(g, x0, gamma, t)
    rows = []
    for j in js:
        plan = TrotterPlan(gamma, t, int(j), ordering)
        ctr = OracleCounter()
        err = trotter_error(g, x0, plan, reference, ctr)
        rows.append({"j": int(j), "error": err, "oracle_calls": ctr.quantum_calls})
    return rows


class LeakageMonitor:
    """Factor hook that raises once the state leaves span{|x, 0, 0>}."""

    def __init__(self, g: Graph, tol: float):
        self.n = g.n
        self.tol = tol
        self.worst = 0.0

    def __call__(self, k: int, c: int, psi: np.ndarray) -> None:
        leak = ancilla_leakage(psi, self.n)
        self.worst = max(self.worst, leak)
        if leak > self.tol:
            raise InvariantViolation(f"ancilla leakage {leak:.3e} after factor {k} (color {c})")
