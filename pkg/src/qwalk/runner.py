"""Run configuration and the engine dispatch shared by the CLI subcommands."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from . import classical, coined, continuous, trotter
from .errors import InvariantViolation
from .graph import Graph
from .linalg import fidelity
from .observables import WALK_KINDS, RunReport, resource_report, total_variation
from .oracle import OracleCounter
from .registers import embed_vertex_state, flag_probability, padded_mass, qubits_of

NORM_TOL = 1e-9
PROB_TOL = 1e-12
FLAG_TOL = 1e-12
PADDED_TOL = 1e-14
LEAK_TOL = 1e-13

CONTINUOUS_KINDS = ("classical-continuous", "continuous-exact")
STOCHASTIC_KINDS = ("classical-sample",)


@dataclass
class RunConfig:
    walk: str = "coined"
    alpha: float = 1.0
    gamma: float = 1.0
    t: float = 1.0
    steps: int = 10
    j: int = 16
    coin: str = "hadamard"
    ordering: str = "interleaved"
    hamiltonian: str = "adjacency"
    seed: int | None = None
    start: int = 0
    every: int = 1
    samples: int = 10
    walkers: int = 1

    def __post_init__(self):
        self.walk = self.walk.replace("_", "-")
        if self.walk not in WALK_KINDS:
            raise ValueError(f"unknown walk kind {self.walk!r}; choose from {', '.join(WALK_KINDS)}")
        if self.walk in STOCHASTIC_KINDS and self.seed is None:
            raise ValueError(f"walk kind {self.walk!r} needs a seed")
        for name in ("steps", "j", "every", "samples", "walkers", "start"):
            value = getattr(self, name)
            if int(value) != value:
                raise ValueError(f"{name} must be an integer, got {value!r}")
            setattr(self, name, int(value))
        if self.every < 1 or self.samples < 1 or self.walkers < 1:
            raise ValueError("every, samples and walkers must be positive")
        if self.steps < 0:
            raise ValueError("steps must be nonnegative")

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name: f for f in dataclasses.fields(cls)}
        unknown = set(data) - set(known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        coerced = {}
        for key, value in data.items():
            if value is None:
                coerced[key] = None
            elif key in ("alpha", "gamma", "t"):
                coerced[key] = float(value)
            elif key in ("steps", "j", "seed", "start", "every", "samples", "walkers"):
                coerced[key] = int(value)
            else:
                coerced[key] = str(value)
        return cls(**coerced)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class RunResult:
    config: RunConfig
    times: list
    dists: list
    states: list | None
    space: str | None
    report: RunReport
    checks: dict = field(default_factory=dict)


def _record(n_items: int, every: int) -> list[int]:
    idx = list(range(0, n_items, every))
    if idx[-1] != n_items - 1:
        idx.append(n_items - 1)
    return idx


def _check(checks: dict, name: str, value: float, tol: float) -> None:
    checks[name] = max(checks.get(name, 0.0), float(value))
    if value > tol:
        raise InvariantViolation(f"{name} = {value:.3e} exceeds {tol:.0e}")


def run_walk(g: Graph, cfg: RunConfig, times=None) -> RunResult:
    """Execute one walk and check its invariants as it goes.

    ``times`` overrides the sample grid of the continuous-time kinds.
    """
    if not 0 <= cfg.start < g.n:
        raise ValueError(f"start vertex {cfg.start} outside [0, {g.n - 1}]")
    ctr = OracleCounter()
    checks: dict = {}
    states = None
    space = None
    report_kwargs: dict = {}

    if cfg.walk in CONTINUOUS_KINDS:
        grid = list(np.linspace(0.0, cfg.t, cfg.samples + 1)) if times is None else list(times)
    if cfg.walk == "classical-discrete":
        traj = classical.discrete_run(g, classical.point_mass(g.n, cfg.start), cfg.alpha, cfg.steps)
        keep = _record(len(traj), cfg.every)
        out_times, dists = keep, [traj[k] for k in keep]
        report_kwargs = {"steps": cfg.steps, "alpha": cfg.alpha}
    elif cfg.walk == "classical-continuous":
        p0 = classical.point_mass(g.n, cfg.start)
        out_times = grid
        dists = [classical.continuous_evolve(g, p0, cfg.gamma, t) for t in grid]
        report_kwargs = {"gamma": cfg.gamma, "t": cfg.t}
    elif cfg.walk == "classical-sample":
        freq = classical.sample_ensemble(g, cfg.start, cfg.alpha, cfg.steps, cfg.walkers,
                                         cfg.seed, ctr)
        keep = _record(len(freq), cfg.every)
        out_times, dists = keep, [freq[k] for k in keep]
        report_kwargs = {"steps": cfg.steps, "alpha": cfg.alpha, "walkers": cfg.walkers,
                         "seed": cfg.seed}
    elif cfg.walk == "coined":
        coin = coined.Coin.named(cfg.coin, g.qubits)
        psi0 = coined.initial_state(cfg.start, g.qubits)
        out_times, dists, states = [], [], []
        for t, psi in enumerate(coined.iterate(psi0, g, coin, cfg.steps, ctr)):
            _check(checks, "norm_drift", abs(np.linalg.norm(psi) - 1.0), NORM_TOL)
            _check(checks, "flag_probability", flag_probability(psi), FLAG_TOL)
            _check(checks, "padded_mass", padded_mass(psi, g.n), PADDED_TOL)
            if t % cfg.every == 0 or t == cfg.steps:
                out_times.append(t)
                dists.append(coined.position_distribution(psi, g.n))
                states.append(psi)
        space = "register"
        report_kwargs = {"steps": cfg.steps, "coin": coin.kind}
    elif cfg.walk == "continuous-exact":
        kind = continuous.HamiltonianKind(cfg.hamiltonian, cfg.gamma)
        prop = continuous.propagator(g, kind)
        psi0 = continuous.basis_state(g.n, cfg.start)
        states = [prop.apply(t, psi0) for t in grid]
        for psi in states:
            _check(checks, "norm_drift", abs(np.linalg.norm(psi) - 1.0), NORM_TOL)
        out_times = grid
        dists = [continuous.position_distribution(psi) for psi in states]
        space = "vertex"
        report_kwargs = {"gamma": cfg.gamma, "t": cfg.t, "hamiltonian": cfg.hamiltonian}
    else:
        plan = trotter.TrotterPlan(cfg.gamma, cfg.t, cfg.j, cfg.ordering)
        monitor = trotter.LeakageMonitor(g, LEAK_TOL)
        if plan.ordering == "interleaved":
            out_times, states = [], []
            slices = trotter.trotter_slices(g, cfg.start, plan, ctr, on_factor=monitor)
            for k, psi in enumerate(slices):
                if k % cfg.every == 0 or k == plan.j:
                    out_times.append(k * cfg.t / plan.j)
                    states.append(psi)
        else:
            psi0 = trotter.start_state(g, cfg.start)
            final = trotter.trotter_run(g, cfg.start, plan, ctr, on_factor=monitor)
            out_times, states = [0.0, cfg.t], [psi0, final]
        checks["ancilla_leakage"] = monitor.worst
        for psi in states:
            _check(checks, "norm_drift", abs(np.linalg.norm(psi) - 1.0), NORM_TOL)
        dists = [coined.position_distribution(psi, g.n) for psi in states]
        space = "register"
        report_kwargs = {"j": cfg.j, "gamma": cfg.gamma, "t": cfg.t, "ordering": cfg.ordering}

    for p in dists:
        _check(checks, "probability_leak", abs(float(np.sum(p)) - 1.0), PROB_TOL)
    report = resource_report(ctr, cfg.walk, g, **report_kwargs)
    return RunResult(cfg, [float(t) for t in out_times], dists, states, space, report, checks)


def _pure_state_pair(a: RunResult, b: RunResult, k_a: int, k_b: int):
    if a.states is None or b.states is None:
        return None
    u, v = a.states[k_a], b.states[k_b]
    if a.space == b.space:
        return u, v
    if a.space == "vertex":
        u = embed_vertex_state(u, qubits_of(v))
    else:
        v = embed_vertex_state(v, qubits_of(u))
    return u, v


def compare(g: Graph, cfg_a: RunConfig, cfg_b: RunConfig, j_sweep=None) -> dict:
    """Run both configurations on g and report per-time distances.

    A continuous-time side is evaluated on the other side's time grid so
    the two always line up. For a Trotter run against the exact walk a
    convergence table over ``j_sweep`` is added.
    """
    a_cont = cfg_a.walk in CONTINUOUS_KINDS
    b_cont = cfg_b.walk in CONTINUOUS_KINDS
    if a_cont and not b_cont:
        res_b = run_walk(g, cfg_b)
        res_a = run_walk(g, cfg_a, times=res_b.times)
    else:
        res_a = run_walk(g, cfg_a)
        res_b = run_walk(g, cfg_b, times=res_a.times if b_cont else None)

    index_b = {round(t, 12): k for k, t in enumerate(res_b.times)}
    rows = []
    for k_a, t in enumerate(res_a.times):
        k_b = index_b.get(round(t, 12))
        if k_b is None:
            continue
        row = {"t": t, "tv": total_variation(res_a.dists[k_a], res_b.dists[k_b])}
        pair = _pure_state_pair(res_a, res_b, k_a, k_b)
        if pair is not None:
            row["fidelity"] = fidelity(*pair)
        rows.append(row)

    out = {
        "graph": g.summary(),
        "a": cfg_a.as_dict(),
        "b": cfg_b.as_dict(),
        "rows": rows,
        "max_tv": max((r["tv"] for r in rows), default=None),
        "reports": {"a": res_a.report.as_dict(), "b": res_b.report.as_dict()},
    }
    kinds = {cfg_a.walk, cfg_b.walk}
    if kinds == {"trotter", "continuous-exact"}:
        tcfg = cfg_a if cfg_a.walk == "trotter" else cfg_b
        js = j_sweep or [tcfg.j]
        out["convergence"] = trotter.convergence_sweep(g, tcfg.start, tcfg.gamma, tcfg.t, js,
                                                       tcfg.ordering)
        out["convergence_reference"] = "adjacency"
    return out
