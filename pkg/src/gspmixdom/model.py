"""Shared domain types: graph elements, parse trees, DP cells and solutions."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

_NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")

# Absorbing top element of the size order; inf + n stays inf.
INFEASIBLE = math.inf


class TreeError(ValueError):
    """Raised when a parse tree violates a composition rule.

    ``kind`` is one of ``TerminalMismatch``, ``SelfLoop`` or ``NameCollision``.
    ``node`` is the offending node when it is known.
    """

    def __init__(self, kind: str, message: str, node: Optional["Node"] = None):
        super().__init__(message)
        self.kind = kind
        self.node = node


def check_name(name: str) -> str:
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise ValueError(f"invalid vertex name {name!r}")
    return name


@dataclass(frozen=True, order=True)
class Vertex:
    name: str

    def __str__(self) -> str:
        return f"v:{self.name}"


@dataclass(frozen=True, order=True)
class Edge:
    index: int
    u: str = field(compare=False)
    v: str = field(compare=False)

    def __str__(self) -> str:
        return f"e:{self.index}"


Element = Union[Vertex, Edge]


def element_key(el: Element) -> tuple:
    """Canonical element order: vertices by name, then edges by leaf index."""
    if isinstance(el, Vertex):
        return (0, el.name, 0)
    return (1, "", el.index)


# -- parse trees -------------------------------------------------------------


class Node:
    """Base class of parse-tree nodes. Every node exposes terminals ``s`` and ``t``.

    Nodes are immutable. Construction checks the local terminal rules; the
    global vertex-name disjointness rule is checked by :func:`validate_tree`.
    """

    __slots__ = ("s", "t", "_hash")
    kind = "?"

    def __setattr__(self, key, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def _init(self, s: str, t: str) -> None:
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "_hash", None)

    @property
    def terminals(self) -> tuple[str, str]:
        return (self.s, self.t)

    def children(self) -> tuple["Node", ...]:
        return ()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Node):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if type(a) is not type(b) or a.s != b.s or a.t != b.t:
                return False
            if isinstance(a, Binary):
                stack.append((a.right, b.right))
                stack.append((a.left, b.left))
        return True

    def __hash__(self) -> int:
        if self._hash is None:
            from .expr import format_expr

            object.__setattr__(self, "_hash", hash(format_expr(self)))
        return self._hash

    def __repr__(self) -> str:
        from .expr import format_expr

        text = format_expr(self)
        if len(text) > 80:
            text = text[:77] + "..."
        return f"<{type(self).__name__} {text}>"


class Leaf(Node):
    __slots__ = ()
    kind = "e"

    def __init__(self, u: str, v: str):
        check_name(u)
        check_name(v)
        if u == v:
            raise TreeError("SelfLoop", f"edge e({u},{v}) is a self-loop")
        self._init(u, v)

    @property
    def u(self) -> str:
        return self.s

    @property
    def v(self) -> str:
        return self.t


class Binary(Node):
    __slots__ = ("left", "right")

    def __init__(self, left: Node, right: Node):
        if not isinstance(left, Node) or not isinstance(right, Node):
            raise TypeError("children must be parse-tree nodes")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        self._init(*self._terminals(left, right))

    def children(self) -> tuple[Node, Node]:
        return (self.left, self.right)

    def _terminals(self, left: Node, right: Node) -> tuple[str, str]:
        raise NotImplementedError


class Series(Binary):
    __slots__ = ()
    kind = "s"

    def _terminals(self, left, right):
        if left.t != right.s:
            raise TreeError(
                "TerminalMismatch",
                f"series needs left.t == right.s, got {left.t} != {right.s}",
            )
        if left.s == right.t:
            raise TreeError(
                "SelfLoop", f"series would identify terminals {left.s} and {right.t}"
            )
        return left.s, right.t


class Parallel(Binary):
    __slots__ = ()
    kind = "p"

    def _terminals(self, left, right):
        if (left.s, left.t) != (right.s, right.t):
            raise TreeError(
                "TerminalMismatch",
                f"parallel needs equal terminals, got ({left.s},{left.t}) "
                f"and ({right.s},{right.t})",
            )
        return left.s, left.t


class GSeries(Binary):
    __slots__ = ()
    kind = "g"

    def _terminals(self, left, right):
        if right.s != left.t:
            raise TreeError(
                "TerminalMismatch",
                f"g-series needs right.s == left.t, got {right.s} != {left.t}",
            )
        if right.t == left.s:
            raise TreeError(
                "NameCollision",
                f"dangling terminal {right.t} of a g-series collides with {left.s}",
            )
        return left.s, left.t


KINDS = {"e": Leaf, "s": Series, "p": Parallel, "g": GSeries}


def postorder(tree: Node) -> Iterator[Node]:
    """Yield nodes children-first without recursion."""
    stack: list[tuple[Node, bool]] = [(tree, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded or isinstance(node, Leaf):
            yield node
        else:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))


def leaves(tree: Node) -> Iterator[Leaf]:
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            yield node
        else:
            stack.append(node.right)
            stack.append(node.left)


def leaf_order(tree: Node) -> list[tuple[int, tuple[str, str]]]:
    """Leaves left to right as ``(index, (u, v))``."""
    return [(i, (leaf.s, leaf.t)) for i, leaf in enumerate(leaves(tree))]


def _identified(node: Binary) -> int:
    return 2 if isinstance(node, Parallel) else 1


def validate_tree(tree: Node) -> Node:
    """Check that children share no vertex names beyond the identified terminals.

    Each composition identifies a fixed number of vertices, so the distinct
    names in the whole tree must equal ``2 * leaves - sum(identified)``; any
    extra sharing anywhere lowers the count. The fast count settles the common
    case. On failure a small-to-large pass locates the offending node.
    """
    expected = 0
    names: set[str] = set()
    for node in postorder(tree):
        if isinstance(node, Leaf):
            expected += 2
            names.add(node.s)
            names.add(node.t)
        else:
            expected -= _identified(node)
    if len(names) == expected:
        return tree
    _locate_collision(tree)
    raise AssertionError("name count mismatch without a located collision")


def _locate_collision(tree: Node) -> None:
    sets: dict[int, set[str]] = {}
    for node in postorder(tree):
        if isinstance(node, Leaf):
            sets[id(node)] = {node.s, node.t}
            continue
        a = sets.pop(id(node.left))
        b = sets.pop(id(node.right))
        if len(a) < len(b):
            a, b = b, a
        shared = {node.left.t} if not isinstance(node, Parallel) else {node.s, node.t}
        clash = sorted(n for n in b if n in a and n not in shared)
        if clash:
            raise TreeError(
                "NameCollision",
                f"children of {node.kind}-node share vertex {clash[0]!r} "
                "outside the identified terminals",
                node,
            )
        a |= b
        sets[id(node)] = a


def size(tree: Node) -> int:
    """Number of leaves."""
    return sum(1 for _ in leaves(tree))


# -- DP cells and solutions --------------------------------------------------

@dataclass(frozen=True)
class DPCell:
    size: float = INFEASIBLE
    count: int = 0
    choice: Optional[tuple] = None

    @property
    def feasible(self) -> bool:
        return self.size != INFEASIBLE


@dataclass(frozen=True)
class Solution:
    gamma_m: int
    count: int
    witness: frozenset

    def sorted_witness(self) -> list[Element]:
        return sorted(self.witness, key=element_key)

    def to_json(self) -> dict:
        verts = [el.name for el in self.sorted_witness() if isinstance(el, Vertex)]
        edges = [
            {"index": el.index, "u": el.u, "v": el.v}
            for el in self.sorted_witness()
            if isinstance(el, Edge)
        ]
        return {
            "gamma_m": self.gamma_m,
            "count": str(self.count),
            "witness": {"vertices": verts, "edges": edges},
        }
