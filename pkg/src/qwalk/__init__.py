"""Classical and quantum walks on general undirected graphs."""

from .errors import GraphError, InvariantViolation
from .graph import Graph, GraphKind, build_graph, color_neighbor, generate
from .oracle import OracleCounter

__all__ = [
    "Graph",
    "GraphError",
    "GraphKind",
    "InvariantViolation",
    "OracleCounter",
    "build_graph",
    "color_neighbor",
    "generate",
]

__version__ = "0.1.0"
