"""Command-line interface: gen, run, compare, report.

Exit status is 0 on success, 2 when a walk breaks one of its invariants
(norm drift, probability or ancilla leakage, oracle tally mismatch) and 1
for usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import continuous, trotter
from .errors import GraphError, InvariantViolation
from .formats import dump_json, write_distributions, write_json
from .graph import Graph, edge_color, generate, parse_kind
from .observables import WALK_KINDS
from .runner import RunConfig, compare, run_walk

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2

RUN_KEYS = ("walk", "alpha", "gamma", "t", "steps", "j", "coin", "ordering", "hamiltonian",
            "seed", "start", "every", "samples", "walkers")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="graph JSON file")
    p.add_argument("--gen", nargs="+", metavar="KIND", help="generate instead, e.g. --gen cycle 8")
    p.add_argument("--gen-seed", type=int, help="seed for generated glued-trees/random graphs")


def _add_run_params(p: argparse.ArgumentParser, walk: bool = True) -> None:
    if walk:
        p.add_argument("--walk", choices=WALK_KINDS)
    p.add_argument("--alpha", type=float, help="move probability of the classical walks")
    p.add_argument("--gamma", type=float, help="hopping rate")
    p.add_argument("--t", type=float, help="total time of continuous-time walks")
    p.add_argument("--steps", type=int, help="steps of discrete-time walks")
    p.add_argument("--j", type=int, help="Trotter slices")
    p.add_argument("--coin", choices=("hadamard", "grover", "dft"))
    p.add_argument("--ordering", choices=trotter.ORDERINGS)
    p.add_argument("--hamiltonian", choices=continuous.HAMILTONIAN_KINDS)
    p.add_argument("--seed", type=int, help="RNG seed (required for classical-sample)")
    p.add_argument("--start", type=int, help="start vertex")
    p.add_argument("--every", type=int, help="record every k-th step or slice")
    p.add_argument("--samples", type=int, help="time samples of continuous-time walks")
    p.add_argument("--walkers", type=int, help="trajectories for classical-sample")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a graph file")
    gen.add_argument("kind", help="line, cycle, hypercube, complete, glued-trees or random")
    gen.add_argument("params", nargs="+", help="size, or depth (glued-trees), or size p (random)")
    gen.add_argument("--seed", type=int)
    gen.add_argument("-o", "--output", help="output path (default stdout)")

    run = sub.add_parser("run", help="run one walk, write distributions CSV and report JSON")
    run.add_argument("--config", help="JSON config; flags override it")
    _add_graph_source(run)
    _add_run_params(run)
    run.add_argument("--out", help="output prefix, writes PREFIX.csv and PREFIX.json")

    cmp_ = sub.add_parser("compare", help="run two walks on one graph and compare them")
    cmp_.add_argument("--config", help="JSON config with optional 'a' and 'b' sections")
    _add_graph_source(cmp_)
    cmp_.add_argument("--a", help="JSON file or key=value,... for the first walk")
    cmp_.add_argument("--b", help="JSON file or key=value,... for the second walk")
    _add_run_params(cmp_, walk=False)
    cmp_.add_argument("--j-sweep", help="comma separated slice counts for trotter vs exact")
    cmp_.add_argument("-o", "--output", help="output path (default stdout)")

    rep = sub.add_parser("report", help="structural reports on a graph")
    _add_graph_source(rep)
    rep.add_argument("--what", choices=("summary", "hamiltonian", "phase", "coloring"),
                     default="summary")
    rep.add_argument("--gamma", type=float, default=1.0)
    rep.add_argument("--t", type=float, default=1.0)
    rep.add_argument("--start", type=int, default=0)
    rep.add_argument("-o", "--output", help="output path (default stdout)")
    return parser


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return data


def _graph_from(args, config: dict) -> Graph:
    if args.graph:
        return Graph.load(args.graph)
    if args.gen:
        return generate(parse_kind(args.gen[0], args.gen[1:], args.gen_seed))
    source = config.get("graph")
    if isinstance(source, str):
        return Graph.load(source)
    if isinstance(source, dict):
        params = [str(p) for p in source.get("params", [])]
        return generate(parse_kind(source["kind"], params, source.get("seed")))
    raise UsageError("no graph given: use --graph FILE or --gen KIND PARAMS")


def _flag_values(args) -> dict:
    return {k: getattr(args, k) for k in RUN_KEYS if getattr(args, k, None) is not None}


def _side_spec(spec: str | None) -> dict:
    if not spec:
        return {}
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        return _load_config(spec)
    out = {}
    for item in spec.split(","):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"expected key=value in {spec!r}")
        out[key.strip()] = value.strip()
    return out


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    g = generate(parse_kind(args.kind, args.params, args.seed))
    _emit(g.to_json(), args.output)
    return EXIT_OK


def cmd_run(args) -> int:
    config = _load_config(args.config)
    g = _graph_from(args, config)
    g.check_invariants()
    settings = {k: v for k, v in config.items() if k in RUN_KEYS}
    settings.update(_flag_values(args))
    cfg = RunConfig.from_mapping(settings)
    prefix = args.out or config.get("out") or "run"
    result = run_walk(g, cfg)
    write_distributions(f"{prefix}.csv", result.times, result.dists)
    write_json(f"{prefix}.json", {
        "config": cfg.as_dict(),
        "report": result.report.as_dict(),
        "checks": result.checks,
        "final_distribution": [float(p) for p in result.dists[-1]],
    })
    return EXIT_OK


def cmd_compare(args) -> int:
    config = _load_config(args.config)
    g = _graph_from(args, config)
    g.check_invariants()
    shared = {k: v for k, v in config.items() if k in RUN_KEYS}
    shared.update(_flag_values(args))
    sides = []
    for name in ("a", "b"):
        settings = dict(shared)
        settings.update(config.get(name, {}))
        settings.update(_side_spec(getattr(args, name)))
        if "walk" not in settings:
            raise UsageError(f"side {name} needs a walk kind")
        sides.append(RunConfig.from_mapping(settings))
    sweep = args.j_sweep or config.get("j_sweep")
    if isinstance(sweep, str):
        sweep = [int(v) for v in sweep.split(",") if v]
    out = compare(g, sides[0], sides[1], sweep)
    _emit(dump_json(out), args.output or config.get("output"))
    return EXIT_OK


def cmd_report(args) -> int:
    g = _graph_from(args, {})
    g.check_invariants()
    if args.what == "summary":
        data = dict(g.summary(), kind=g.kind, seed=g.seed, regular=g.is_regular())
    elif args.what == "hamiltonian":
        data = trotter.hamiltonian_report(g, args.gamma)
    elif args.what == "phase":
        psi0 = continuous.basis_state(g.n, args.start)
        data = continuous.phase_equivalence_report(g, psi0, args.gamma, args.t)
    else:
        data = _coloring_report(g)
    _emit(dump_json(data), args.output)
    return EXIT_OK


def _coloring_report(g: Graph) -> dict:
    colors = [edge_color(g.n, x, y) for x, y in g.edges]
    per_vertex_ok = True
    for x in range(g.n):
        incident = [edge_color(g.n, x, y) for y in range(g.n) if g.adjacency(x, y)]
        per_vertex_ok &= len(incident) == len(set(incident))
    used = np.bincount(colors, minlength=g.n) if colors else np.zeros(g.n, dtype=int)
    return {
        "colors": g.n,
        "max_degree": int(g.degrees.max()),
        "edges_per_color": used.tolist(),
        "consistent": bool(per_vertex_ok),
    }


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "compare": cmd_compare, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InvariantViolation as exc:
        print(f"qwalk: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (UsageError, GraphError, ValueError, KeyError, OSError) as exc:
        print(f"qwalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
