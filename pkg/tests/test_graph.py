import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mlndecouple import EdgeListError, GraphError, LayerGraph, build_mln, load_edge_list, read_edge_list, save_edge_list
from mlndecouple.graph import load_layers_remapped, sidecar_path


def write(tmp_path, text, name="g.edges"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_collapses_duplicates(tmp_path):
    g = load_edge_list(write(tmp_path, "0 1\n1 2\n2 1\n"))
    assert g.n == 3
    assert g.edges().tolist() == [[0, 1], [1, 2]]
    assert g.edge_count == 2


def test_load_drops_self_loops(tmp_path):
    g, stats = read_edge_list(write(tmp_path, "0 0\n0 1\n"))
    assert g.edges().tolist() == [[0, 1]]
    assert stats.self_loops == 1


def test_load_empty_with_n(tmp_path):
    g = load_edge_list(write(tmp_path, ""), n=5)
    assert (g.n, g.edge_count) == (5, 0)


def test_load_comments_tabs_and_spaces(tmp_path):
    g = load_edge_list(write(tmp_path, "# header\n0\t1\n2    1\n"))
    assert g.edges().tolist() == [[0, 1], [1, 2]]


@pytest.mark.parametrize(
    "text, lineno",
    [("0 1\n1 x\n", 2), ("0 1\n2\n", 2), ("# c\n0 1 2\n", 2), ("0 -1\n", 1)],
)
def test_parse_errors_carry_line_number(tmp_path, text, lineno):
    with pytest.raises(EdgeListError) as err:
        load_edge_list(write(tmp_path, text))
    assert err.value.lineno == lineno


def test_id_beyond_n(tmp_path):
    with pytest.raises(EdgeListError) as err:
        load_edge_list(write(tmp_path, "0 1\n3 4\n"), n=4)
    assert err.value.lineno == 2


def test_sidecar_supplies_n_for_trailing_isolated(tmp_path):
    g = LayerGraph.from_edges(6, [(0, 1)])
    p = tmp_path / "g.edges"
    save_edge_list(g, p, meta={"generator": "test"})
    assert json.loads(sidecar_path(p).read_text())["n"] == 6
    assert load_edge_list(p) == g


def test_save_canonical_order(tmp_path):
    g = LayerGraph.from_edges(3, [(1, 0), (2, 1)])
    p = tmp_path / "out.edges"
    save_edge_list(g, p)
    assert p.read_text() == "0 1\n1 2\n"


def test_save_empty(tmp_path):
    p = tmp_path / "out.edges"
    save_edge_list(LayerGraph.empty(3), p)
    assert p.read_text() == ""


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 40).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))))
def test_round_trip_and_invariants(tmp_path_factory, case):
    n, edges = case
    g = LayerGraph.from_edges(n, edges)
    # simple + symmetric
    for u in range(n):
        nb = g.neighbors(u).tolist()
        assert u not in nb
        assert nb == sorted(set(nb))
        for v in nb:
            assert u in g.neighbors(v)
    assert g.degrees.sum() == 2 * g.edge_count
    assert g.edge_count == len({(min(a, b), max(a, b)) for a, b in edges if a != b})
    p = tmp_path_factory.mktemp("rt") / "g.edges"
    save_edge_list(g, p)
    assert load_edge_list(p, n) == g


def test_graph_is_immutable():
    g = LayerGraph.from_edges(3, [(0, 1)])
    with pytest.raises(ValueError):
        g.indices[0] = 2
    with pytest.raises(AttributeError):
        g.n = 4


def test_build_mln():
    g4, h4 = LayerGraph.empty(4), LayerGraph.from_edges(4, [(0, 1)])
    mln = build_mln([("L1", g4), ("L2", h4)])
    assert mln.n == 4 and mln.names == ["L1", "L2"]
    assert mln["L2"] == h4
    assert len(build_mln([("only", g4)])) == 1


@pytest.mark.parametrize(
    "layers",
    [
        [("L1", LayerGraph.empty(4)), ("L2", LayerGraph.empty(5))],
        [("L1", LayerGraph.empty(4)), ("L1", LayerGraph.empty(4))],
        [],
    ],
)
def test_build_mln_rejects(layers):
    with pytest.raises(GraphError):
        build_mln(layers)


def test_remapped_labels_shared_across_layers(tmp_path):
    a = write(tmp_path, "alice bob\nbob carol\n", "a.edges")
    b = write(tmp_path, "carol dave\n", "b.edges")
    mln, labels = load_layers_remapped([a, b])
    assert labels == ["alice", "bob", "carol", "dave"]
    assert mln.n == 4
    assert mln["L2"].edges().tolist() == [[2, 3]]


def test_edge_keys_sorted():
    g = LayerGraph.from_edges(5, [(4, 0), (3, 1), (0, 1)])
    keys = g.edge_keys()
    assert np.all(np.diff(keys) > 0)
