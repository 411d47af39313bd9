"""Bottom-up dynamic program over binary parse trees.

Every node carries a 7x7 table of cells indexed by the states of its two
terminals. A cell holds the size of a minimum partial solution in that state,
the number of such minimum partial solutions, and a backpointer to the child
cells it came from.

Edges that join the two terminals of a p-graph need care: either terminal's
future edges can dominate them, so their status cannot be folded into one
terminal's state. Tables therefore keep them out of ``all_edges_dominated``
internally and remember only whether such an edge exists (``direct``). Such an
edge is dominated exactly when one terminal is touched (states 0-2). When a
merge turns a terminal into an internal or dangling vertex, the pending
obligation moves to the remaining terminal. :meth:`StateTable.cell` projects
back to the plain meaning of the flags.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .model import (
    INFEASIBLE,
    DPCell,
    Edge,
    GSeries,
    Leaf,
    Node,
    Parallel,
    Series,
    Solution,
    Vertex,
    postorder,
)
from .states import COMBINE, SETTLED, TOUCHED, degrade, overlap


class NoSolution(RuntimeError):
    pass


def cell_index(i: int, j: int) -> int:
    return 7 * i + j


# Leaf cells as (i, j) -> (take u, take v, take edge).
LEAF_PICKS = {
    (0, 0): (True, True, True),
    (0, 2): (True, False, True),
    (2, 0): (False, True, True),
    (1, 1): (True, True, False),
    (2, 2): (False, False, True),
    (1, 3): (True, False, False),
    (3, 1): (False, True, False),
    (5, 5): (False, False, False),
}


@dataclass(frozen=True)
class StateTable:
    """Cells in the internal convention plus the ``direct`` edge marker."""

    cells: tuple  # 49 DPCell, row-major in (i, j)
    direct: bool

    def internal(self, i: int, j: int) -> DPCell:
        return self.cells[cell_index(i, j)]

    def cell(self, i: int, j: int) -> DPCell:
        """Cell ``(i, j)`` with the flags read literally over all incident edges."""
        return self.view()[cell_index(i, j)]

    def view(self) -> tuple:
        if not self.direct:
            return self.cells
        best = [DPCell() for _ in range(49)]
        for i in range(7):
            for j in range(7):
                c = self.cells[cell_index(i, j)]
                if not c.feasible:
                    continue
                pi, pj = (i, j)
                if i not in TOUCHED and j not in TOUCHED:
                    pi, pj = degrade(i), degrade(j)
                k = cell_index(pi, pj)
                cur = best[k]
                if c.size < cur.size:
                    best[k] = DPCell(c.size, c.count, (i, j))
                elif c.size == cur.size:
                    best[k] = DPCell(cur.size, cur.count + c.count, cur.choice)
        return tuple(best)

    def accepts(self, i: int, j: int) -> bool:
        """Whether a root cell describes a full mixed dominating set."""
        if i not in SETTLED or j not in SETTLED:
            return False
        return not self.direct or i in TOUCHED or j in TOUCHED


def leaf_table(u: str = "u", v: str = "v") -> StateTable:
    """Enumerate the eight subsets of ``{u, v, uv}``."""
    if u == v:
        raise ValueError("leaf endpoints must differ")
    cells = [DPCell() for _ in range(49)]
    for (i, j), picks in LEAF_PICKS.items():
        cells[cell_index(i, j)] = DPCell(sum(picks), 1, None)
    return StateTable(tuple(cells), True)


# -- merge rules -------------------------------------------------------------
#
# A rule (out, l, r, ov) says: left cell l and right cell r combine into cell
# out, and ov shared-vertex memberships were counted on both sides. Rules
# depend on the merge kind and on whether each child has a direct edge.
# They are sorted by (l, r) so the first minimum found is the lexicographic one.


def _series_rules(dl: bool, dr: bool):
    rules = []
    for i in range(7):
        for a in range(7):
            for b in range(7):
                mid = COMBINE[a][b]
                if mid is None or mid not in SETTLED:
                    continue
                for j in range(7):
                    oi, oj = i, j
                    if mid not in TOUCHED:
                        # The middle vertex cannot dominate its direct edges
                        # to x or y; the surviving terminal has to.
                        if dl and i not in TOUCHED:
                            oi = degrade(i)
                        if dr and j not in TOUCHED:
                            oj = degrade(j)
                    rules.append(
                        (cell_index(oi, oj), cell_index(i, a), cell_index(b, j), overlap(a, b))
                    )
    return rules


def _parallel_rules(dl: bool, dr: bool):
    rules = []
    for il in range(7):
        for jl in range(7):
            for ir in range(7):
                i = COMBINE[il][ir]
                if i is None:
                    continue
                for jr in range(7):
                    j = COMBINE[jl][jr]
                    if j is None:
                        continue
                    rules.append(
                        (
                            cell_index(i, j),
                            cell_index(il, jl),
                            cell_index(ir, jr),
                            overlap(il, ir) + overlap(jl, jr),
                        )
                    )
    return rules


def _gseries_rules(dl: bool, dr: bool):
    rules = []
    for i in range(7):
        for jl in range(7):
            for ir in range(7):
                j = COMBINE[jl][ir]
                if j is None:
                    continue
                for jr in sorted(SETTLED):
                    oj = j
                    if dr and jr not in TOUCHED and j not in TOUCHED:
                        oj = degrade(j)
                    rules.append(
                        (cell_index(i, oj), cell_index(i, jl), cell_index(ir, jr), overlap(jl, ir))
                    )
    return rules


KIND_CODES = {Series: 1, Parallel: 2, GSeries: 3}
_BUILDERS = {1: _series_rules, 2: _parallel_rules, 3: _gseries_rules}

# RULES[kind][dl][dr]
RULES = {
    kind: {
        dl: {dr: tuple(sorted(build(dl, dr), key=lambda r: (r[1], r[2]))) for dr in (False, True)}
        for dl in (False, True)
    }
    for kind, build in _BUILDERS.items()
}


def merged_direct(kind: int, dl: bool, dr: bool) -> bool:
    if kind == 1:
        return False
    if kind == 2:
        return dl or dr
    return dl


def _merge(kind: int, left: StateTable, right: StateTable) -> StateTable:
    size = [INFEASIBLE] * 49
    count = [0] * 49
    choice: list[Optional[tuple]] = [None] * 49
    lc, rc = left.cells, right.cells
    for out, l, r, ov in RULES[kind][left.direct][right.direct]:
        a = lc[l]
        if a.size == INFEASIBLE:
            continue
        b = rc[r]
        if b.size == INFEASIBLE:
            continue
        s = a.size + b.size - ov
        if s < size[out]:
            size[out] = s
            count[out] = a.count * b.count
            choice[out] = (l, r)
        elif s == size[out]:
            count[out] += a.count * b.count
    cells = tuple(DPCell(size[k], count[k], choice[k]) for k in range(49))
    return StateTable(cells, merged_direct(kind, left.direct, right.direct))


def merge_series(left: StateTable, right: StateTable) -> StateTable:
    """Left child has terminals (x, z), right child (z, y); z becomes internal."""
    return _merge(1, left, right)


def merge_parallel(left: StateTable, right: StateTable) -> StateTable:
    """Both children have terminals (x, y)."""
    return _merge(2, left, right)


def merge_gseries(left: StateTable, right: StateTable) -> StateTable:
    """Left child (x, y), right child (y, z); z dangles and must be settled now."""
    return _merge(3, left, right)


def root_cell(table: StateTable) -> tuple[int, int]:
    """Lexicographically least accepted cell of minimum size."""
    best = None
    for i in range(7):
        for j in range(7):
            c = table.internal(i, j)
            if c.feasible and table.accepts(i, j):
                if best is None or c.size < table.internal(*best).size:
                    best = (i, j)
    if best is None:
        raise NoSolution("no settled root cell is feasible")
    return best


def extract_root(table: StateTable) -> tuple[int, int]:
    """Return ``(gamma_m, count)`` from a root table."""
    i, j = root_cell(table)
    gamma = table.internal(i, j).size
    total = sum(
        table.internal(a, b).count
        for a in range(7)
        for b in range(7)
        if table.accepts(a, b) and table.internal(a, b).size == gamma
    )
    return int(gamma), total


def tables(tree: Node) -> dict:
    """Tables for every node, keyed by ``id(node)``."""
    out: dict[int, StateTable] = {}
    for node in postorder(tree):
        if isinstance(node, Leaf):
            out[id(node)] = leaf_table(node.s, node.t)
        else:
            out[id(node)] = _merge(
                KIND_CODES[type(node)], out[id(node.left)], out[id(node.right)]
            )
    return out


def reconstruct(tree: Node, annotations: dict, cell: Optional[tuple[int, int]] = None) -> frozenset:
    """Follow backpointers from a root cell down to the leaves."""
    if cell is None:
        cell = root_cell(annotations[id(tree)])
    witness = set()
    leaf_no = {id(leaf): k for k, leaf in enumerate(_leaves_of(tree))}
    stack = [(tree, cell_index(*cell))]
    while stack:
        node, k = stack.pop()
        if isinstance(node, Leaf):
            take_u, take_v, take_e = LEAF_PICKS[divmod(k, 7)]
            if take_u:
                witness.add(Vertex(node.s))
            if take_v:
                witness.add(Vertex(node.t))
            if take_e:
                witness.add(Edge(leaf_no[id(node)], node.s, node.t))
            continue
        l, r = annotations[id(node)].cells[k].choice
        stack.append((node.right, r))
        stack.append((node.left, l))
    return frozenset(witness)


def _leaves_of(tree: Node):
    return [n for n in postorder(tree) if isinstance(n, Leaf)]


def solve_reference(tree: Node) -> Solution:
    """Pure-Python solve; readable and slow."""
    annotations = tables(tree)
    root = annotations[id(tree)]
    gamma, count = extract_root(root)
    return Solution(gamma, count, reconstruct(tree, annotations, root_cell(root)))


def solve(tree: Node, engine: str = "auto") -> Solution:
    """Minimum mixed dominating set size, number of minimum sets and one witness.

    ``engine`` is ``"python"``, ``"numba"`` or ``"auto"`` (numba when it
    imports, else python). Both engines return identical solutions.
    """
    if engine == "python":
        return solve_reference(tree)
    if engine not in ("auto", "numba"):
        raise ValueError(f"unknown engine {engine!r}")
    try:
        from . import _fast
    except ImportError:
        if engine == "numba":
            raise
        return solve_reference(tree)
    return _fast.solve(tree)
