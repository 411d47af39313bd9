"""Seeded random GSP parse trees, exhaustive small trees, and edge-list decomposition."""

from __future__ import annotations

from itertools import product
from typing import Iterator, Optional

from .model import GSeries, Leaf, Node, Parallel, Series, check_name, validate_tree

MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea and Flood 2014). Portable, 64-bit state."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, n: int) -> int:
        """Integer in [0, n); plain modulo reduction."""
        return self.next_u64() % n


_CLASSES = {"s": Series, "p": Parallel, "g": GSeries}


def _parse_weights(weights) -> tuple[float, float, float]:
    w = tuple(float(x) for x in weights)
    if len(w) != 3 or any(x < 0 or x != x for x in w) or sum(w) <= 0:
        raise ValueError(f"weights must be three nonnegative numbers, not all zero: {weights!r}")
    return w


def generate(seed: int, leaves: int, weights=(1.0, 1.0, 1.0)) -> Node:
    """Random parse tree with exactly ``leaves`` leaves.

    Nodes are expanded in pre-order. An internal node with budget ``k`` draws
    its kind (one ``random()`` against the normalized weights, in the order
    series, parallel, g-series) and then its left budget ``1 + below(k - 1)``.
    Names are assigned top-down: the root is ``(v0, v1)``, a series node
    creates its middle vertex and a g-series node its dangling vertex, each
    with the next fresh ``v<n>``.
    """
    if leaves < 1:
        raise ValueError("leaves must be >= 1")
    ws, wp, wg = _parse_weights(weights)
    total = ws + wp + wg
    cuts = (ws / total, (ws + wp) / total)
    rng = SplitMix64(seed)

    # Pre-order records: [kind, s, t, left, right]
    recs: list[list] = [[None, "v0", "v1", -1, -1]]
    fresh = 2
    budgets = [leaves]
    stack = [0]
    while stack:
        idx = stack.pop()
        k = budgets[idx]
        rec = recs[idx]
        if k == 1:
            rec[0] = "e"
            continue
        x = rng.random()
        kind = "s" if x < cuts[0] else "p" if x < cuts[1] else "g"
        left_budget = 1 + rng.below(k - 1)
        s, t = rec[1], rec[2]
        if kind == "s":
            mid = f"v{fresh}"
            fresh += 1
            lt, rt = (s, mid), (mid, t)
        elif kind == "p":
            lt, rt = (s, t), (s, t)
        else:
            z = f"v{fresh}"
            fresh += 1
            lt, rt = (s, t), (t, z)
        rec[0] = kind
        rec[3] = len(recs)
        recs.append([None, lt[0], lt[1], -1, -1])
        budgets.append(left_budget)
        rec[4] = len(recs)
        recs.append([None, rt[0], rt[1], -1, -1])
        budgets.append(k - left_budget)
        # Left subtree first, so its fresh names come first.
        stack.append(rec[4])
        stack.append(rec[3])

    nodes: list[Optional[Node]] = [None] * len(recs)
    for idx in range(len(recs) - 1, -1, -1):
        kind, s, t, l, r = recs[idx]
        if kind == "e":
            nodes[idx] = Leaf(s, t)
        else:
            nodes[idx] = _CLASSES[kind](nodes[l], nodes[r])
            nodes[l] = nodes[r] = None
    return nodes[0]


def _shapes(n: int):
    if n == 1:
        yield None
        return
    for k in range(1, n):
        for left in _shapes(k):
            for right in _shapes(n - k):
                yield (left, right)


def _internal_count(shape) -> int:
    return 0 if shape is None else 1 + _internal_count(shape[0]) + _internal_count(shape[1])


def enumerate_trees(max_leaves: int) -> Iterator[Node]:
    """Every shape with up to ``max_leaves`` leaves times every kind assignment.

    Names follow the same top-down scheme as :func:`generate`, so every
    combination is valid.
    """
    for n in range(1, max_leaves + 1):
        for shape in _shapes(n):
            for kinds in product("spg", repeat=_internal_count(shape)):
                yield _build(shape, iter(kinds))


def _build(shape, kinds) -> Node:
    fresh = [2]

    def name():
        fresh[0] += 1
        return f"v{fresh[0] - 1}"

    def go(sh, s, t):
        if sh is None:
            return Leaf(s, t)
        kind = next(kinds)
        if kind == "s":
            m = name()
            return Series(go(sh[0], s, m), go(sh[1], m, t))
        if kind == "p":
            return Parallel(go(sh[0], s, t), go(sh[1], s, t))
        z = name()
        return GSeries(go(sh[0], s, t), go(sh[1], t, z))

    return go(shape, "v0", "v1")


# -- decomposition -----------------------------------------------------------


class NotReducible(ValueError):
    pass


class Disconnected(ValueError):
    pass


class _Edge:
    __slots__ = ("id", "u", "v", "trees")

    def __init__(self, eid, u, v, trees):
        self.id, self.u, self.v = eid, u, v
        self.trees = trees  # {(u, v): Node, (v, u): Node}

    def oriented(self, a, b) -> Node:
        return self.trees[(a, b)]

    def other(self, x):
        return self.v if self.u == x else self.u


def _attach(tree: Node, hanging: list) -> Node:
    """Hang each p-graph in ``hanging`` at the second terminal of ``tree``."""
    for h in hanging:
        tree = GSeries(tree, h)
    return tree


def decompose(pairs, terminals: tuple[str, str]) -> Node:
    """Reduce an edge list to a parse tree with the given terminals.

    Until one edge remains, apply the first rule that fires: merge two
    parallel edges (lowest vertex pair first); contract a non-terminal vertex
    of degree 2 with distinct neighbors; detach a non-terminal vertex of
    degree 1 (lowest names first). A detached vertex's edge, with everything
    already hanging from that vertex, is kept as a p-graph hanging from the
    neighbor. It becomes a g-series child as soon as the neighbor is the
    second terminal of some part: when the neighbor is contracted, or when it
    is the final ``t``. Nothing can hang from the first terminal ``s``.

    Best effort: some GSP graphs are rejected for some terminal pairs.
    """
    s, t = terminals
    check_name(s)
    check_name(t)
    if s == t:
        raise ValueError("terminals must differ")
    pairs = list(pairs)
    if not pairs:
        raise ValueError("empty edge list")
    names = {x for p in pairs for x in p}
    for x in (s, t):
        if x not in names:
            raise ValueError(f"terminal {x!r} is not a vertex of the graph")
    _check_connected(pairs)

    edges: dict[int, _Edge] = {}
    inc: dict[str, set[int]] = {x: set() for x in names}
    hanging: dict[str, list] = {x: [] for x in names}
    next_id = [0]

    def add(u, v, trees):
        e = _Edge(next_id[0], u, v, trees)
        next_id[0] += 1
        edges[e.id] = e
        inc[u].add(e.id)
        inc[v].add(e.id)

    def remove(e):
        del edges[e.id]
        inc[e.u].discard(e.id)
        inc[e.v].discard(e.id)

    for u, v in pairs:
        add(u, v, {(u, v): Leaf(u, v), (v, u): Leaf(v, u)})

    while len(edges) > 1:
        if _reduce_parallel(edges, add, remove):
            continue
        if _reduce_series(edges, inc, hanging, add, remove, (s, t)):
            continue
        if _reduce_pendant(edges, inc, hanging, remove, (s, t)):
            continue
        raise NotReducible("no reduction applies")

    (last,) = edges.values()
    if {last.u, last.v} != {s, t}:
        raise NotReducible(f"reduced to a single edge {last.u}-{last.v}, not {s}-{t}")
    if hanging[s]:
        raise NotReducible(f"a subgraph hangs from the first terminal {s}")
    return validate_tree(_attach(last.oriented(s, t), hanging[t]))


def _reduce_parallel(edges, add, remove) -> bool:
    groups: dict[tuple, list] = {}
    for e in edges.values():
        groups.setdefault(tuple(sorted((e.u, e.v))), []).append(e)
    for key in sorted(groups):
        group = groups[key]
        if len(group) < 2:
            continue
        a, b = sorted(group, key=lambda e: e.id)[:2]
        x, y = key
        remove(a)
        remove(b)
        add(x, y, {o: Parallel(a.oriented(*o), b.oriented(*o)) for o in ((x, y), (y, x))})
        return True
    return False


def _reduce_series(edges, inc, hanging, add, remove, terms) -> bool:
    for m in sorted(inc):
        if m in terms or len(inc[m]) != 2:
            continue
        e1, e2 = sorted((edges[k] for k in inc[m]), key=lambda e: e.id)
        a, b = e1.other(m), e2.other(m)
        if a == b:
            continue
        extra = hanging.pop(m)
        trees = {
            (a, b): Series(_attach(e1.oriented(a, m), extra), e2.oriented(m, b)),
            (b, a): Series(_attach(e2.oriented(b, m), extra), e1.oriented(m, a)),
        }
        remove(e1)
        remove(e2)
        del inc[m]
        add(a, b, trees)
        return True
    return False


def _reduce_pendant(edges, inc, hanging, remove, terms) -> bool:
    for p in sorted(inc):
        if p in terms or len(inc[p]) != 1:
            continue
        (pid,) = inc[p]
        pend = edges[pid]
        w = pend.other(p)
        hanging[w].append(_attach(pend.oriented(w, p), hanging.pop(p)))
        remove(pend)
        del inc[p]
        return True
    return False


def _check_connected(pairs) -> None:
    adj: dict[str, set[str]] = {}
    for u, v in pairs:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x] - seen:
            seen.add(y)
            stack.append(y)
    if len(seen) != len(adj):
        raise Disconnected("graph is not connected")
