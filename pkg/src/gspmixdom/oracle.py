"""Brute-force ground truth for mixed domination on small multigraphs."""

from __future__ import annotations

from itertools import combinations

from .model import Edge, Element, Vertex
from .realize import Multigraph

SIZE_LIMIT = 24


class SizeLimitExceeded(RuntimeError):
    pass


def closed_mixed_neighborhood(graph: Multigraph, r: Element) -> set:
    if isinstance(r, Vertex):
        if r.name not in graph.incidence:
            raise KeyError(f"unknown vertex {r.name!r}")
        inc = graph.incidence[r.name]
        return {r} | {Vertex(x) for x in graph.neighbors(r.name)} | set(inc)
    if not (0 <= r.index < len(graph.edges)):
        raise KeyError(f"unknown edge {r.index}")
    e = graph.edges[r.index]
    return {e, Vertex(e.u), Vertex(e.v)} | set(graph.incidence[e.u]) | set(
        graph.incidence[e.v]
    )


def _check_member(graph: Multigraph, el: Element) -> None:
    if isinstance(el, Vertex):
        if el.name not in graph.incidence:
            raise KeyError(f"unknown vertex {el.name!r}")
    elif not (0 <= el.index < len(graph.edges)):
        raise KeyError(f"unknown edge {el.index}")


def undominated(graph: Multigraph, S) -> list:
    """Elements whose closed mixed neighborhood misses ``S``, in canonical order."""
    S = set(S)
    for el in S:
        _check_member(graph, el)
    return [r for r in graph.elements() if not (closed_mixed_neighborhood(graph, r) & S)]


def is_mixed_dominating(graph: Multigraph, S) -> bool:
    return not undominated(graph, S)


def _masks(graph: Multigraph):
    elements = graph.elements()
    pos = {el: i for i, el in enumerate(elements)}
    masks = []
    for el in elements:
        m = 0
        for x in closed_mixed_neighborhood(graph, el):
            m |= 1 << pos[x]
        masks.append(m)
    return elements, masks


def brute_force(graph: Multigraph, force: bool = False):
    """Return ``(gamma_m, count, witness)`` by layered subset enumeration.

    Subsets are tried in nondecreasing size; the witness is the
    lexicographically least minimum set in canonical element order.
    """
    n = len(graph.vertices) + len(graph.edges)
    if n > SIZE_LIMIT and not force:
        raise SizeLimitExceeded(f"{n} elements exceeds the limit of {SIZE_LIMIT}")
    elements, masks = _masks(graph)
    bits = [1 << i for i in range(n)]
    for k in range(n + 1):
        count = 0
        witness = None
        for combo in combinations(range(n), k):
            s = 0
            for i in combo:
                s |= bits[i]
            if all(m & s for m in masks):
                count += 1
                if witness is None:
                    witness = combo
        if count:
            return k, count, frozenset(elements[i] for i in witness)
    raise AssertionError("the full element set always dominates")
