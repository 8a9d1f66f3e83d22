"""Distribution metrics and oracle-call resource reports."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvariantViolation
from .graph import Graph
from .oracle import OracleCounter

DEFAULT_MIXING_EPS = 1.0 / math.e


def total_variation(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch {p.shape} vs {q.shape}")
    return float(0.5 * np.sum(np.abs(p - q)))


def distance_to_uniform(p) -> float:
    p = np.asarray(p, dtype=float)
    return total_variation(p, np.full(p.shape, 1.0 / p.size))


def position_moments(p) -> dict[str, float]:
    p = np.asarray(p, dtype=float)
    x = np.arange(p.size)
    mean = float(np.dot(p, x))
    var = float(np.dot(p, (x - mean) ** 2))
    return {"mean": mean, "std": math.sqrt(max(var, 0.0))}


def hitting_curve(traj: Sequence, target: int) -> list[float]:
    """Probability of sitting on ``target`` at each recorded time."""
    return [float(p[target]) for p in traj]


def mixing_curve(traj: Sequence) -> list[float]:
    """Total variation distance to the uniform distribution at each recorded time."""
    return [distance_to_uniform(p) for p in traj]


def first_time_below(curve: Sequence[float], eps: float = DEFAULT_MIXING_EPS) -> int | None:
    """Index of the first entry strictly below eps, or None if the curve never gets there."""
    for k, value in enumerate(curve):
        if value < eps:
            return k
    return None


# resource accounting

WALK_KINDS = ("classical-discrete", "classical-continuous", "classical-sample",
              "coined", "continuous-exact", "trotter")


@dataclass
class RunReport:
    walk_kind: str
    graph: dict
    params: dict
    oracle_calls: dict
    expected_calls: dict
    expected_classical_move_rate: float | None = None
    quantum_calls_per_step: int | None = None
    mismatches: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)


def expected_calls(walk_kind: str, g: Graph, *, steps: int | None = None, j: int | None = None,
                   walkers: int = 1) -> dict[str, int]:
    """Closed-form oracle tallies for one run of the given walk."""
    expected = {"classical_queries": 0, "quantum_calls": 0, "oso_calls": 0}
    if walk_kind == "coined":
        expected["quantum_calls"] = 2 * steps
    elif walk_kind == "trotter":
        expected["quantum_calls"] = 2 * g.n * j
    elif walk_kind == "classical-sample":
        expected["classical_queries"] = steps * walkers
    elif walk_kind not in WALK_KINDS:
        raise ValueError(f"unknown walk kind {walk_kind!r}")
    return expected


def resource_report(ctr: OracleCounter, walk_kind: str, g: Graph, *, steps: int | None = None,
                    j: int | None = None, alpha: float | None = None, walkers: int = 1,
                    **params) -> RunReport:
    """Measured tallies next to their closed forms; raises InvariantViolation on any mismatch."""
    expected = expected_calls(walk_kind, g, steps=steps, j=j, walkers=walkers)
    measured = ctr.as_dict()
    mismatches = [k for k in expected if expected[k] != measured[k]]
    per_step = {"coined": 2, "trotter": 2 * g.n}.get(walk_kind)
    move_rate = None
    if alpha is not None:
        move_rate = float(alpha * g.degrees.mean() / g.n)
    run_params = {k: v for k, v in dict(params, steps=steps, j=j, alpha=alpha).items()
                  if v is not None}
    if walk_kind == "classical-sample":
        run_params["walkers"] = walkers
    report = RunReport(
        walk_kind=walk_kind,
        graph=g.summary(),
        params=run_params,
        oracle_calls=measured,
        expected_calls=expected,
        expected_classical_move_rate=move_rate,
        quantum_calls_per_step=per_step,
        mismatches=mismatches,
    )
    if mismatches:
        detail = ", ".join(f"{k}: measured {measured[k]}, expected {expected[k]}"
                           for k in mismatches)
        raise InvariantViolation(f"oracle tally mismatch ({detail})")
    return report
