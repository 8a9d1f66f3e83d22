"""Classical random walks: exact distributions and seeded Monte Carlo trajectories."""

from __future__ import annotations

import numpy as np

from .graph import Graph
from .oracle import OracleCounter, classical_query

PROB_TOL = 1e-12


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")


def _as_dist(p, n: int) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (n,):
        raise ValueError(f"distribution of shape {p.shape} does not match {n} vertices")
    if np.any(p < -1e-15) or abs(p.sum() - 1.0) > PROB_TOL:
        raise ValueError("not a probability distribution")
    return np.clip(p, 0.0, None)


def point_mass(n: int, x0: int) -> np.ndarray:
    p = np.zeros(n)
    p[x0] = 1.0
    return p


def generator(g: Graph, rate: float = 1.0) -> np.ndarray:
    """rate * (A - D): the shared generator of both classical walks."""
    a = g.adjacency_matrix()
    return rate * (a - np.diag(g.degrees.astype(float)))


def transition_matrix(g: Graph, alpha: float) -> np.ndarray:
    """Column-stochastic one-step update I + (alpha/N)(A - D)."""
    _check_alpha(alpha)
    return np.eye(g.n) + generator(g, alpha / g.n)


def discrete_step(g: Graph, p, alpha: float) -> np.ndarray:
    """P'(x) = P(x) + (alpha/N) sum_y {A_xy P(y) - A_yx P(x)}."""
    _check_alpha(alpha)
    p = _as_dist(p, g.n)
    a = g.adjacency_matrix()
    flow = a @ p - g.degrees * p
    # alpha * d_x / N < 1, so entries stay nonnegative
    return np.clip(p + (alpha / g.n) * flow, 0.0, None)


def discrete_run(g: Graph, p0, alpha: float, steps: int) -> list[np.ndarray]:
    """Trajectory [P(0), P(1), ..., P(steps)]."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    traj = [_as_dist(p0, g.n)]
    for _ in range(steps):
        traj.append(discrete_step(g, traj[-1], alpha))
    return traj


def continuous_evolve(g: Graph, p0, gamma: float, t: float) -> np.ndarray:
    """exp(gamma (A - D) t) P0, from the spectrum of the symmetric matrix A - D."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    if t < 0:
        raise ValueError("t must be nonnegative")
    p0 = _as_dist(p0, g.n)
    w, v = np.linalg.eigh(generator(g))
    p = v @ (np.exp(gamma * w * t) * (v.T @ p0))
    return np.clip(p, 0.0, None)


def euler_evolve(g: Graph, p0, gamma: float, t: float, m: int) -> np.ndarray:
    """(I + L t/m)^m P0 with L = gamma (A - D): m discrete steps of size t/m."""
    p = np.asarray(p0, dtype=float)
    step = np.eye(g.n) + generator(g, gamma) * (t / m)
    for _ in range(m):
        p = step @ p
    return p


def sample_walk(g: Graph, x0: int, alpha: float, steps: int, seed,
                ctr: OracleCounter | None = None) -> np.ndarray:
    """One Monte Carlo trajectory of vertex indices, length steps + 1.

    Each step proposes y uniformly on [0, N-1] (y = x allowed), spends one
    classical query on A_xy, and moves with probability alpha if connected.
    ``seed`` is anything ``numpy.random.default_rng`` accepts.
    """
    _check_alpha(alpha)
    if not 0 <= x0 < g.n:
        raise ValueError(f"start vertex {x0} outside [0, {g.n - 1}]")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    rng = np.random.default_rng(seed)
    proposals = rng.integers(0, g.n, size=steps)
    coins = rng.random(steps)
    traj = np.empty(steps + 1, dtype=np.int64)
    traj[0] = x = x0
    for k in range(steps):
        y = int(proposals[k])
        if classical_query(g, x, y, ctr) and coins[k] < alpha:
            x = y
        traj[k + 1] = x
    return traj


def sample_ensemble(g: Graph, x0: int, alpha: float, steps: int, walkers: int, seed,
                    ctr: OracleCounter | None = None) -> np.ndarray:
    """Occupation frequencies over ``walkers`` independent trajectories, shape (steps+1, N)."""
    counts = np.zeros((steps + 1, g.n))
    for child in np.random.SeedSequence(seed).spawn(walkers):
        traj = sample_walk(g, x0, alpha, steps, child, ctr)
        counts[np.arange(steps + 1), traj] += 1
    return counts / walkers
