import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bhrank.errors import EmptyGraph, ParseError, SelfLoop
from bhrank.graph import WeightBounds, build_graph
from bhrank.io import (
    EdgeListFormat,
    load_edge_list,
    parse_edge_list,
    read_metadata,
    read_rank_csv,
    write_edge_list,
    write_metadata,
    write_rank_csv,
)

from conftest import random_graph


def test_minimal_two_line_file(tmp_path):
    f = tmp_path / "cycle.edges"
    f.write_text("0 1 0.8\n1 0 0.6")
    g = load_edge_list(f)
    assert g.n == 2
    assert list(g.arcs()) == [(0, 1, 0.8), (1, 0, 0.6)]
    assert g.labels == ("0", "1")


def test_malformed_token_reports_line(tmp_path):
    f = tmp_path / "bad.edges"
    f.write_text("0 x 1.0\n")
    with pytest.raises(ParseError) as exc:
        load_edge_list(f)
    assert exc.value.line == 1


@pytest.mark.parametrize(
    "text, line",
    [("% c\n0 1\n", 2), ("0 1 abc\n", 1), ("0 1 1\n2\n", 2), ("0 1 nan\n", 1)],
)
def test_parse_errors(tmp_path, text, line):
    f = tmp_path / "bad.edges"
    f.write_text(text)
    with pytest.raises(ParseError) as exc:
        load_edge_list(f)
    assert exc.value.line == line


def test_comments_and_konect_columns(tmp_path):
    f = tmp_path / "out.test"
    f.write_text("% sym weighted\n% 3 3 3\n1 2 1.0 123456\n# other comment\n2 3 0.6 7\n\n3 1 0.8\n")
    g = load_edge_list(f)
    assert g.n == 3 and g.n_arcs == 3
    assert g.labels == ("1", "2", "3")


def test_token_ids_keep_first_appearance_order(tmp_path):
    f = tmp_path / "names.edges"
    f.write_text("federico alan 1.0\nalan miguel 0.8\nmiguel federico 0.6\n")
    g = load_edge_list(f, EdgeListFormat(node_ids="token"))
    assert g.labels == ("federico", "alan", "miguel")
    assert list(g.arcs()) == [(0, 1, 1.0), (1, 2, 0.8), (2, 0, 0.6)]


def test_duplicates_keep_last_with_count(tmp_path):
    f = tmp_path / "dup.edges"
    f.write_text("0 1 0.6\n1 0 0.8\n0 1 1.0\n0 1 0.8\n")
    parsed = parse_edge_list(f)
    assert parsed.duplicates == 2
    with pytest.warns(UserWarning, match="2 duplicate"):
        g = load_edge_list(f)
    assert dict(((s, t), w) for s, t, w in g.arcs()) == {(0, 1): 0.8, (1, 0): 0.8}


def test_self_loop_policy(tmp_path):
    f = tmp_path / "loop.edges"
    f.write_text("0 0 1.0\n0 1 1.0\n")
    with pytest.raises(SelfLoop):
        load_edge_list(f)
    g = load_edge_list(f, EdgeListFormat(self_loops="drop"))
    assert g.n_arcs == 1
    assert parse_edge_list(f, EdgeListFormat(self_loops="drop")).self_loops_dropped == 1


def test_empty_file(tmp_path):
    f = tmp_path / "empty.edges"
    f.write_text("% nothing here\n")
    with pytest.raises(EmptyGraph):
        load_edge_list(f)


def test_default_weight_for_unweighted_lines(tmp_path):
    f = tmp_path / "u.edges"
    f.write_text("0 1\n1 2\n")
    g = load_edge_list(f, EdgeListFormat(default_weight=1.0))
    assert g.weight.tolist() == [1.0, 1.0]


@given(st.integers(0, 2**32 - 1), st.integers(1, 25), st.booleans())
@settings(max_examples=30, deadline=None)
def test_round_trip_preserves_arcs_and_bounds(tmp_path_factory, seed, n, per_node):
    g = random_graph(np.random.default_rng(seed), n, per_node=per_node)
    path = tmp_path_factory.mktemp("rt") / "g.edges"
    write_edge_list(g, path)
    h = load_edge_list(path)
    assert h.n == g.n  # sidecar keeps isolated nodes
    assert list(h.arcs()) == list(g.arcs())
    lo_g, hi_g = g.bounds.arrays(n)
    lo_h, hi_h = h.bounds.arrays(n)
    assert np.array_equal(lo_g, lo_h) and np.array_equal(hi_g, hi_h)


def test_round_trip_without_sidecar_by_label(tmp_path):
    g = build_graph(3, [(0, 2, 1.5), (2, 1, 0.25)], labels=["a", "b", "c"])
    path = write_edge_list(g, tmp_path / "g.edges", meta=False)
    h = load_edge_list(path, EdgeListFormat(node_ids="token"))
    arcs_g = {(g.label(s), g.label(t), w) for s, t, w in g.arcs()}
    arcs_h = {(h.label(s), h.label(t), w) for s, t, w in h.arcs()}
    assert arcs_g == arcs_h


def test_sidecar_format(tmp_path):
    g = build_graph(2, [(0, 1, 3.0)], WeightBounds.uniform(0, 10), labels=["x", "y"])
    write_metadata(g, tmp_path / "m.meta")
    text = (tmp_path / "m.meta").read_text()
    assert "bounds = global" in text and "label.1 = y" in text
    md = read_metadata(tmp_path / "m.meta")
    assert md["n"] == 2 and md["labels"] == ["x", "y"]
    assert md["bounds"].node(0) == (0.0, 10.0)


def test_per_node_sidecar_without_label_map(tmp_path):
    f = tmp_path / "b.meta"
    f.write_text("bounds = per-node\nbound.a = 0:1\nbound.b = 0.5:2\n")
    md = read_metadata(f)
    assert md["labels"] == ["a", "b"]
    assert md["bounds"].node(1) == (0.5, 2.0)


def test_rank_csv_round_trip(tmp_path):
    path = write_rank_csv(
        tmp_path / "r.csv", ["a", "b", "c"], [0.2, 0.5, 0.3], [3, 1, 2], {"d": 0.85, "p_b": 0.1}
    )
    lines = path.read_text().splitlines()
    assert lines[0] == "# d=0.85,p_b=0.1"
    assert lines[1] == "node_label,score,rank_position"
    header, rows = read_rank_csv(path)
    assert header == {"d": "0.85", "p_b": "0.1"}
    assert rows == [("b", 0.5, 1), ("c", 0.3, 2), ("a", 0.2, 3)]
