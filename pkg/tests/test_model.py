import pytest

from gspmixdom.model import (
    DPCell,
    Edge,
    GSeries,
    Leaf,
    Parallel,
    Series,
    Solution,
    TreeError,
    Vertex,
    leaf_order,
    size,
    validate_tree,
)


def test_leaf_order_single():
    assert leaf_order(Leaf("a", "b")) == [(0, ("a", "b"))]


def test_leaf_order_series():
    t = Series(Leaf("a", "b"), Leaf("b", "c"))
    assert leaf_order(t) == [(0, ("a", "b")), (1, ("b", "c"))]


def test_leaf_order_triangle():
    t = Parallel(Series(Leaf("a", "b"), Leaf("b", "c")), Leaf("a", "c"))
    assert [i for i, _ in leaf_order(t)] == [0, 1, 2]
    assert leaf_order(t)[2] == (2, ("a", "c"))
    assert size(t) == 3


def test_terminals():
    assert Series(Leaf("a", "b"), Leaf("b", "c")).terminals == ("a", "c")
    assert Parallel(Leaf("a", "b"), Leaf("a", "b")).terminals == ("a", "b")
    assert GSeries(Leaf("a", "b"), Leaf("b", "c")).terminals == ("a", "b")


@pytest.mark.parametrize(
    "build, kind",
    [
        (lambda: Leaf("a", "a"), "SelfLoop"),
        (lambda: Series(Leaf("a", "b"), Leaf("c", "d")), "TerminalMismatch"),
        (lambda: Series(Leaf("a", "b"), Leaf("b", "a")), "SelfLoop"),
        (lambda: Parallel(Leaf("a", "b"), Leaf("b", "a")), "TerminalMismatch"),
        (lambda: GSeries(Leaf("a", "b"), Leaf("c", "d")), "TerminalMismatch"),
        (lambda: GSeries(Leaf("a", "b"), Leaf("b", "a")), "NameCollision"),
    ],
)
def test_local_rules(build, kind):
    with pytest.raises(TreeError) as info:
        build()
    assert info.value.kind == kind


def test_name_collision_located():
    inner = Series(Leaf("a", "c"), Leaf("c", "b"))
    bad = Parallel(Series(Leaf("a", "c"), Leaf("c", "b")), inner)
    with pytest.raises(TreeError) as info:
        validate_tree(bad)
    assert info.value.kind == "NameCollision"
    assert info.value.node is bad


def test_valid_tree_passes_through():
    t = Parallel(Series(Leaf("a", "x"), Leaf("x", "b")), Series(Leaf("a", "y"), Leaf("y", "b")))
    assert validate_tree(t) is t


def test_nodes_are_immutable_and_comparable():
    t = Series(Leaf("a", "b"), Leaf("b", "c"))
    with pytest.raises(AttributeError):
        t.left = Leaf("a", "b")
    assert t == Series(Leaf("a", "b"), Leaf("b", "c"))
    assert hash(t) == hash(Series(Leaf("a", "b"), Leaf("b", "c")))
    assert t != GSeries(Leaf("a", "b"), Leaf("b", "c"))


def test_edge_identity_is_the_index():
    assert Edge(0, "a", "b") == Edge(0, "b", "a")
    assert Edge(0, "a", "b") != Edge(1, "a", "b")
    assert str(Edge(3, "a", "b")) == "e:3"
    assert str(Vertex("a")) == "v:a"


def test_dpcell_defaults_infeasible():
    c = DPCell()
    assert not c.feasible and c.count == 0
    assert DPCell(0, 1).feasible


def test_solution_json():
    sol = Solution(2, 15, frozenset({Edge(0, "a", "c"), Vertex("a")}))
    assert sol.to_json() == {
        "gamma_m": 2,
        "count": "15",
        "witness": {"vertices": ["a"], "edges": [{"index": 0, "u": "a", "v": "c"}]},
    }
    assert [str(e) for e in sol.sorted_witness()] == ["v:a", "e:0"]
