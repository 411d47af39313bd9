"""The seven terminal states and how they combine when p-graphs share a vertex.

A terminal's state records four facts about a partial solution ``S``:

* ``in_set``: the terminal itself is in ``S``;
* ``edge_in_set``: some incident edge is in ``S``;
* ``dominated``: the terminal's closed mixed neighborhood meets ``S``;
* ``all_edges_dominated``: every incident edge's closed neighborhood meets ``S``.

Membership of the vertex or of an incident edge implies both domination
flags, which leaves exactly seven consistent combinations.
"""

from __future__ import annotations

from typing import NamedTuple, Optional


class StateFlags(NamedTuple):
    in_set: bool
    edge_in_set: bool
    dominated: bool
    all_edges_dominated: bool

    def consistent(self) -> bool:
        if self.in_set or self.edge_in_set:
            return self.dominated and self.all_edges_dominated
        return True


T, F = True, False
FLAGS = (
    StateFlags(T, T, T, T),
    StateFlags(T, F, T, T),
    StateFlags(F, T, T, T),
    StateFlags(F, F, T, T),
    StateFlags(F, F, T, F),
    StateFlags(F, F, F, T),
    StateFlags(F, F, F, F),
)
_STATE_OF = {f: i for i, f in enumerate(FLAGS)}

SETTLED = frozenset({0, 1, 2, 3})
# States where the vertex or an incident edge is in the set.
TOUCHED = frozenset({0, 1, 2})


class InconsistentFlags(ValueError):
    pass


def classify(flags) -> int:
    flags = StateFlags(*flags)
    try:
        return _STATE_OF[flags]
    except KeyError:
        raise InconsistentFlags(f"no terminal state has flags {tuple(flags)}") from None


def flags(state: int) -> StateFlags:
    return FLAGS[state]


def is_settled(state: int) -> bool:
    return state in SETTLED


def combine(a: int, b: int) -> Optional[int]:
    """State of a vertex shared by two edge-disjoint p-graphs, or None if incompatible.

    The two sides must agree on whether the vertex is in the set. A solution
    element at the vertex (the vertex, or an edge on one side) dominates every
    edge at the vertex on the other side.
    """
    fa, fb = FLAGS[a], FLAGS[b]
    if fa.in_set != fb.in_set:
        return None
    inside = fa.in_set
    return classify(
        StateFlags(
            inside,
            fa.edge_in_set or fb.edge_in_set,
            fa.dominated or fb.dominated,
            (fa.all_edges_dominated or fb.edge_in_set or inside)
            and (fb.all_edges_dominated or fa.edge_in_set or inside),
        )
    )


COMBINE = tuple(tuple(combine(a, b) for b in range(7)) for a in range(7))

PAIRS = tuple(
    tuple((a, b) for a in range(7) for b in range(7) if COMBINE[a][b] == k) for k in range(7)
)


def pairs_for(target: int) -> frozenset:
    """All ``(a, b)`` with ``combine(a, b) == target``."""
    return frozenset(PAIRS[target])


def incompatible_pairs() -> frozenset:
    return frozenset((a, b) for a in range(7) for b in range(7) if COMBINE[a][b] is None)


def overlap(a: int, b: int) -> int:
    """1 when both sides hold the shared vertex in the set (it is counted twice)."""
    return 1 if a in (0, 1) and b in (0, 1) else 0


def degrade(state: int) -> int:
    """The same state with an extra undominated incident edge."""
    return {3: 4, 5: 6}.get(state, state)
