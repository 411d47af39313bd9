import math
from itertools import combinations

import pytest

from gspmixdom.dp import (
    NoSolution,
    StateTable,
    extract_root,
    leaf_table,
    merge_gseries,
    merge_parallel,
    merge_series,
    reconstruct,
    root_cell,
    solve,
    solve_reference,
    tables,
)
from gspmixdom.expr import parse_expr
from gspmixdom.instances import enumerate_trees, generate
from gspmixdom.model import DPCell, Edge, Vertex
from gspmixdom.oracle import closed_mixed_neighborhood, is_mixed_dominating
from gspmixdom.realize import realize
from gspmixdom.states import StateFlags, classify


def terminal_state(graph, S, x):
    inc = graph.incidence[x]
    return classify(
        StateFlags(
            in_set=Vertex(x) in S,
            edge_in_set=any(e in S for e in inc),
            dominated=bool(closed_mixed_neighborhood(graph, Vertex(x)) & S),
            all_edges_dominated=all(closed_mixed_neighborhood(graph, e) & S for e in inc),
        )
    )


def brute_cells(graph):
    """(i, j) -> (size, count) over partial solutions of a p-graph.

    A partial solution dominates every vertex other than the terminals and
    every edge not incident to a terminal; the rest is described by the states.
    """
    s, t = graph.terminals
    must = [Vertex(v) for v in graph.vertices if v not in (s, t)]
    must += [e for e in graph.edges if s not in (e.u, e.v) and t not in (e.u, e.v)]
    elements = graph.elements()
    cells = {}
    for k in range(len(elements) + 1):
        for combo in combinations(elements, k):
            S = set(combo)
            if not all(closed_mixed_neighborhood(graph, r) & S for r in must):
                continue
            key = (terminal_state(graph, S, s), terminal_state(graph, S, t))
            size, count = cells.get(key, (k, 0))
            if size == k:
                cells[key] = (k, count + 1)
    return cells


def test_leaf_cells():
    table = leaf_table("x", "y")
    assert (table.cell(0, 2).size, table.cell(0, 2).count) == (2, 1)
    assert (table.cell(6, 6).size, table.cell(6, 6).count) == (0, 1)
    assert not table.cell(4, 4).feasible and table.cell(4, 4).count == 0
    assert sum(c.feasible for c in table.view()) == 8


def test_leaf_rejects_self_loop():
    with pytest.raises(ValueError):
        leaf_table("x", "x")


def test_series_path():
    p3 = merge_series(leaf_table("a", "b"), leaf_table("b", "c"))
    assert (p3.cell(3, 3).size, p3.cell(3, 3).count) == (1, 1)
    assert p3.cell(3, 3).choice == (7 * 3 + 1, 7 * 1 + 3)
    assert extract_root(p3) == (1, 1)


def test_merge_with_infeasible_table():
    dead = StateTable(tuple(DPCell() for _ in range(49)), False)
    leaf = leaf_table()
    for merge in (merge_series, merge_parallel, merge_gseries):
        assert not any(c.feasible for c in merge(leaf, dead).cells)
        assert not any(c.feasible for c in merge(dead, leaf).cells)
    with pytest.raises(NoSolution):
        root_cell(dead)


def test_triangle_root():
    path = merge_series(leaf_table("a", "b"), leaf_table("b", "c"))
    assert extract_root(merge_parallel(path, leaf_table("a", "c"))) == (2, 15)


def test_parallel_cell_55_needs_55_children():
    table = merge_parallel(leaf_table(), leaf_table())
    assert table.internal(5, 5).choice == (7 * 5 + 5, 7 * 5 + 5)


def test_gseries_path():
    table = merge_gseries(leaf_table("a", "b"), leaf_table("b", "c"))
    assert extract_root(table) == (1, 1)
    sol = solve_reference(parse_expr("g(e(a,b),e(b,c))"))
    assert sol.witness == {Vertex("b")}


def test_single_edge_root():
    table = leaf_table("x", "y")
    assert extract_root(table) == (1, 3)
    tree = parse_expr("e(x,y)")
    assert reconstruct(tree, tables(tree), (1, 3)) == {Vertex("x")}
    assert reconstruct(tree, tables(tree), (2, 2)) == {Edge(0, "x", "y")}


@pytest.mark.parametrize(
    "expr, gamma, count, witness",
    [
        ("e(a,b)", 1, 3, {Vertex("a")}),
        ("s(e(a,b),e(b,c))", 1, 1, {Vertex("b")}),
        ("p(s(e(a,b),e(b,c)),e(a,c))", 2, 15, None),
    ],
)
@pytest.mark.parametrize("engine", ["python", "numba"])
def test_solve_fixtures(expr, gamma, count, witness, engine):
    tree = parse_expr(expr)
    sol = solve(tree, engine=engine)
    assert (sol.gamma_m, sol.count) == (gamma, count)
    assert len(sol.witness) == gamma
    assert is_mixed_dominating(realize(tree), sol.witness)
    if witness is not None:
        assert sol.witness == witness


def test_cells_match_restricted_brute_force():
    checked = 0
    for tree in enumerate_trees(4):
        graph = realize(tree)
        want = brute_cells(graph)
        view = tables(tree)[id(tree)].view()
        got = {
            divmod(k, 7): (c.size, c.count) for k, c in enumerate(view) if c.feasible
        }
        assert got == want, tree
        checked += 1
    assert checked == 157


@pytest.mark.parametrize("seed", range(40))
def test_engines_agree(seed):
    tree = generate(seed, 1 + seed * 7, weights=(1 + seed % 3, 1, 1 + seed % 2))
    assert solve(tree, engine="python") == solve(tree, engine="numba")


def test_huge_counts_exact():
    tree = generate(5, 3000)
    ref = solve(tree, engine="python")
    fast = solve(tree, engine="numba")
    assert ref.count > 2**62
    assert ref == fast


def test_upper_bound_on_random_trees():
    for seed in range(200):
        tree = generate(seed, 1 + seed % 40)
        graph = realize(tree)
        assert solve(tree).gamma_m <= math.ceil(len(graph.vertices) / 2)


def test_deterministic():
    tree = generate(9, 500)
    assert solve(tree) == solve(tree)
    assert solve(tree).sorted_witness() == solve(generate(9, 500)).sorted_witness()


def test_unknown_engine():
    with pytest.raises(ValueError):
        solve(parse_expr("e(a,b)"), engine="gpu")
