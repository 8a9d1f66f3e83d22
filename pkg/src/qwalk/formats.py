"""CSV and JSON writers with byte-stable output."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def fmt(value) -> str:
    """17 significant digits, round-trip exact."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.16e}"


def distribution_rows(times: Sequence, dists: Sequence) -> tuple[list[str], list[list[str]]]:
    n = len(dists[0]) if len(dists) else 0
    header = ["t"] + [f"P{x}" for x in range(n)]
    rows = [[fmt(t)] + [fmt(p) for p in dist] for t, dist in zip(times, dists)]
    return header, rows


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    lines = [",".join(header)] + [",".join(r) for r in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_distributions(path: str | Path, times: Sequence, dists: Sequence) -> None:
    write_csv(path, *distribution_rows(times, dists))


def read_distributions(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1:]


def dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, default=_default) + "\n"


def write_json(path: str | Path, data) -> None:
    Path(path).write_text(dump_json(data), encoding="utf-8")


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")
