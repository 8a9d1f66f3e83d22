"""Undirected simple graphs, generators and the complete-graph edge coloring."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import GraphError

GRAPH_KINDS = ("line", "cycle", "hypercube", "complete", "glued_trees", "random")


def register_qubits(n_vertices: int) -> int:
    """Qubits needed to hold one vertex index, ceil(log2 N)."""
    if n_vertices < 1:
        raise ValueError("need at least one vertex")
    return (n_vertices - 1).bit_length()


class Graph:
    """Immutable undirected graph on vertices 0..n-1 without loops or multi-edges.

    Edges are kept both as a sorted tuple of ``(x, y)`` pairs with ``x < y``
    and as a dense 0/1 adjacency table so that a single lookup answers
    whether ``{x, y}`` is an edge.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], *,
                 kind: str | None = None, seed: int | None = None):
        if int(n) != n or n < 1:
            raise GraphError(f"vertex count must be a positive integer, got {n!r}")
        n = int(n)
        adj = np.zeros((n, n), dtype=np.uint8)
        pairs = []
        for edge in edges:
            x, y = (int(v) for v in edge)
            if not (0 <= x < n and 0 <= y < n):
                raise GraphError(f"edge ({x}, {y}) has an index outside [0, {n - 1}]",
                                 pair=(x, y))
            if x == y:
                raise GraphError(f"self-loop at vertex {x}", pair=(x, y))
            if adj[x, y]:
                raise GraphError(f"duplicate edge ({x}, {y})", pair=(x, y))
            adj[x, y] = adj[y, x] = 1
            pairs.append((min(x, y), max(x, y)))
        adj.setflags(write=False)
        self._n = n
        self._adj = adj
        self._edges = tuple(sorted(pairs))
        self._degrees = adj.sum(axis=0, dtype=np.int64)
        self._degrees.setflags(write=False)
        self.kind = kind
        self.seed = seed

    @property
    def n(self) -> int:
        return self._n

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def qubits(self) -> int:
        return register_qubits(self._n)

    def adjacency(self, x: int, y: int) -> int:
        """A_xy, with indices at or beyond N (register padding) disconnected."""
        if x >= self._n or y >= self._n:
            return 0
        return int(self._adj[x, y])

    def degree(self, x: int) -> int:
        if not 0 <= x < self._n:
            raise GraphError(f"vertex {x} outside [0, {self._n - 1}]")
        return int(self._degrees[x])

    def adjacency_matrix(self, dtype=float) -> np.ndarray:
        return self._adj.astype(dtype)

    def padded_adjacency(self, qubits: int | None = None) -> np.ndarray:
        """Boolean 2^n x 2^n adjacency; padded rows and columns are all False."""
        if qubits is None:
            qubits = self.qubits
        return self._padded(qubits)

    def _padded(self, qubits: int) -> np.ndarray:
        cache = self.__dict__.setdefault("_padded_cache", {})
        if qubits not in cache:
            dim = 1 << qubits
            if dim < self._n:
                raise ValueError(f"{qubits} qubits cannot index {self._n} vertices")
            mask = np.zeros((dim, dim), dtype=bool)
            mask[:self._n, :self._n] = self._adj.astype(bool)
            mask.setflags(write=False)
            cache[qubits] = mask
        return cache[qubits]

    def degree_histogram(self) -> dict[int, int]:
        values, counts = np.unique(self._degrees, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    def is_regular(self) -> bool:
        return bool(np.all(self._degrees == self._degrees[0]))

    def check_invariants(self) -> None:
        """Full scan of the adjacency table; raises GraphError on any violation."""
        a = self._adj
        if not np.array_equal(a, a.T):
            raise GraphError("adjacency is not symmetric")
        if np.any(np.diag(a)):
            raise GraphError("adjacency has a nonzero diagonal")
        if np.any(a > 1):
            raise GraphError("adjacency entries must be 0 or 1")
        if np.any(self._degrees > self._n - 1) or np.any(self._degrees < 0):
            raise GraphError("degree out of range")
        if int(self._degrees.sum()) != 2 * len(self._edges):
            raise GraphError("degree sum does not match edge count")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        label = f" kind={self.kind!r}" if self.kind else ""
        return f"Graph(n={self._n}, edges={len(self._edges)}{label})"

    def summary(self) -> dict:
        return {
            "n": self._n,
            "edges": len(self._edges),
            "degree_histogram": {str(k): v for k, v in self.degree_histogram().items()},
        }

    # serialization

    def to_dict(self) -> dict:
        data: dict = {"n": self._n, "edges": [list(e) for e in self._edges]}
        if self.kind is not None:
            data["kind"] = self.kind
        if self.seed is not None:
            data["seed"] = self.seed
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":")) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        try:
            n = data["n"]
            edges = data["edges"]
        except KeyError as exc:
            raise GraphError(f"graph file is missing field {exc}") from None
        return cls(n, (tuple(e) for e in edges), kind=data.get("kind"), seed=data.get("seed"))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Graph":
        graph = cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
        graph.check_invariants()
        return graph


def build_graph(n: int, edge_list: Iterable[tuple[int, int]]) -> Graph:
    return Graph(n, edge_list)


def color_neighbor(n: int, c: int, x: int) -> int:
    """Neighbor of x along color c in the coloring c = (x + y) mod N.

    When the result equals x the color is inert at x (there is no loop).
    """
    return (c - x) % n


def edge_color(n: int, x: int, y: int) -> int:
    return (x + y) % n


# generators


@dataclass(frozen=True)
class GraphKind:
    tag: str
    size: int | None = None
    depth: int | None = None
    p: float | None = None
    seed: int | None = None

    def __post_init__(self):
        tag = self.tag.replace("-", "_")
        object.__setattr__(self, "tag", tag)
        if tag not in GRAPH_KINDS:
            raise GraphError(f"unknown graph kind {self.tag!r}")
        if tag == "glued_trees":
            if self.depth is None or self.depth < 1:
                raise GraphError("glued_trees needs depth >= 1")
            if self.seed is None:
                raise GraphError("glued_trees needs an explicit seed")
            return
        if self.size is None or self.size < 1:
            raise GraphError(f"{tag} needs a positive size")
        if tag == "hypercube" and self.size & (self.size - 1):
            raise GraphError(f"hypercube size must be a power of 2, got {self.size}")
        if tag == "cycle" and self.size < 3:
            raise GraphError("cycle needs at least 3 vertices")
        if tag == "random":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise GraphError(f"random edge probability must lie in [0, 1], got {self.p}")
            if self.seed is None:
                raise GraphError("random graphs need an explicit seed")


def line(n: int) -> Graph:
    return Graph(n, [(x, x + 1) for x in range(n - 1)], kind="line")


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least 3 vertices")
    return Graph(n, [(x, (x + 1) % n) for x in range(n)], kind="cycle")


def hypercube(size: int) -> Graph:
    if size < 1 or size & (size - 1):
        raise GraphError(f"hypercube size must be a power of 2, got {size}")
    dim = int(math.log2(size))
    edges = [(x, x ^ (1 << k)) for x in range(size) for k in range(dim) if x < x ^ (1 << k)]
    return Graph(size, edges, kind="hypercube")


def complete(n: int) -> Graph:
    return Graph(n, [(x, y) for x in range(n) for y in range(x + 1, n)], kind="complete")


def glued_trees(depth: int, seed: int) -> Graph:
    """Two complete binary trees of the given depth, leaves joined by a random cycle.

    The left tree keeps heap labels 0..M-1 (root 0); the right tree's heap
    label i maps to 2M-1-i, so its root is the last vertex. The leaf sets
    are shuffled and stitched into one alternating cycle, giving every leaf
    two cross edges.
    """
    if depth < 1:
        raise GraphError("glued_trees needs depth >= 1")
    m = 2 ** (depth + 1) - 1
    n = 2 * m
    edges = []
    for i in range(m // 2):
        for child in (2 * i + 1, 2 * i + 2):
            edges.append((i, child))
            edges.append((n - 1 - i, n - 1 - child))
    first_leaf = m // 2
    left = np.arange(first_leaf, m)
    right = n - 1 - left
    rng = np.random.default_rng(seed)
    left = rng.permutation(left)
    right = rng.permutation(right)
    k = len(left)
    for i in range(k):
        edges.append((int(left[i]), int(right[i])))
        edges.append((int(right[i]), int(left[(i + 1) % k])))
    return Graph(n, edges, kind="glued_trees", seed=seed)


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p); pairs are visited in lexicographic order."""
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"random edge probability must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    xs, ys = np.triu_indices(n, k=1)
    keep = rng.random(xs.size) < p
    return Graph(n, zip(xs[keep].tolist(), ys[keep].tolist()), kind="random", seed=seed)


def generate(kind: GraphKind) -> Graph:
    if kind.tag == "line":
        return line(kind.size)
    if kind.tag == "cycle":
        return cycle(kind.size)
    if kind.tag == "hypercube":
        return hypercube(kind.size)
    if kind.tag == "complete":
        return complete(kind.size)
    if kind.tag == "glued_trees":
        return glued_trees(kind.depth, kind.seed)
    return random_graph(kind.size, kind.p, kind.seed)


def parse_kind(tag: str, params: list[str], seed: int | None = None) -> GraphKind:
    """Build a GraphKind from command-line style tokens, e.g. ('random', ['8', '0.4'])."""
    tag = tag.replace("-", "_")
    try:
        if tag == "glued_trees":
            (depth,) = params
            return GraphKind(tag, depth=int(depth), seed=seed)
        if tag == "random":
            size, p = params
            return GraphKind(tag, size=int(size), p=float(p), seed=seed)
        (size,) = params
        return GraphKind(tag, size=int(size))
    except ValueError as exc:
        raise GraphError(f"bad parameters {params} for graph kind {tag!r}: {exc}") from None
