"""Materialize the multigraph denoted by a parse tree, plus edge-list and DOT I/O."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .model import Edge, Node, Vertex, check_name, leaves


@dataclass(frozen=True)
class Multigraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    terminals: Optional[tuple[str, str]] = None
    incidence: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        inc: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            if e.u == e.v:
                raise ValueError(f"self-loop at {e.u}")
            for x in (e.u, e.v):
                if x not in inc:
                    raise ValueError(f"edge {e.index} uses unknown vertex {x}")
                inc[x].append(e)
        object.__setattr__(self, "incidence", inc)

    @classmethod
    def from_edges(cls, pairs, terminals=None) -> "Multigraph":
        pairs = list(pairs)
        names = sorted({x for p in pairs for x in p})
        edges = tuple(Edge(i, u, v) for i, (u, v) in enumerate(pairs))
        return cls(tuple(names), edges, terminals)

    def elements(self) -> list:
        """Vertices by name, then edges by index."""
        return [Vertex(v) for v in self.vertices] + list(self.edges)

    def degree(self, v: str) -> int:
        try:
            return len(self.incidence[v])
        except KeyError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def neighbors(self, v: str) -> set[str]:
        return {e.v if e.u == v else e.u for e in self.incidence[v]}

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            x = stack.pop()
            for y in self.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.vertices)


def realize(tree: Node) -> Multigraph:
    """One edge per leaf, in left-to-right leaf order; terminals are the root's."""
    edges = tuple(Edge(i, leaf.s, leaf.t) for i, leaf in enumerate(leaves(tree)))
    names = sorted({x for e in edges for x in (e.u, e.v)})
    return Multigraph(tuple(names), edges, (tree.s, tree.t))


def degree(graph: Multigraph, v: str) -> int:
    return graph.degree(v)


def to_edge_list(graph: Multigraph) -> str:
    lines = []
    if graph.terminals:
        lines.append(f"# terminals {graph.terminals[0]} {graph.terminals[1]}")
    lines.extend(f"{e.u} {e.v}" for e in graph.edges)
    return "\n".join(lines) + "\n"


def to_dot(graph: Multigraph) -> str:
    lines = ["graph G {"]
    terms = set(graph.terminals or ())
    for v in graph.vertices:
        attr = " [shape=doublecircle]" if v in terms else ""
        lines.append(f"  {v}{attr};")
    for e in graph.edges:
        lines.append(f'  {e.u} -- {e.v} [label="{e.index}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> list[tuple[str, str]]:
    """Parse ``u v`` lines; ``#`` starts a comment. Raises ValueError on bad lines."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {raw.strip()!r}")
        u, v = parts
        try:
            check_name(u)
            check_name(v)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if u == v:
            raise ValueError(f"line {lineno}: self-loop {u} {v}")
        pairs.append((u, v))
    return pairs
