"""Minimum mixed dominating sets of generalized series-parallel graphs.

Solves, counts and witnesses minimum mixed dominating sets with a dynamic
program over binary parse trees, and checks the answers against brute force.
"""

from .dp import solve
from .expr import ParseError, format_expr, parse_expr
from .instances import decompose, generate
from .model import Edge, GSeries, Leaf, Parallel, Series, Solution, Vertex
from .oracle import brute_force, is_mixed_dominating
from .realize import Multigraph, realize

__all__ = [
    "Edge",
    "GSeries",
    "Leaf",
    "Multigraph",
    "Parallel",
    "ParseError",
    "Series",
    "Solution",
    "Vertex",
    "brute_force",
    "decompose",
    "format_expr",
    "generate",
    "is_mixed_dominating",
    "parse_expr",
    "realize",
    "solve",
]
