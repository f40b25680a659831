import random

import pytest
from hypothesis import given

from minorcat.experiments import ReportRow
from minorcat.graphs import (GraphError, OrderedDirectedGraph, canonical_form, format_graph_text,
                             graph_from_json, graph_to_json, is_isomorphic, load_graph,
                             parse_graph_text, star)
from minorcat.homology import HomologyGroup
from strategies import connected_graphs, relabel

K13 = """\
graph K13   # a claw
vertex c
vertex x
vertex y
vertex z

edge e1 x c
edge e2 y c
edge e3 z c
"""


def test_parse_text():
    g = parse_graph_text(K13)
    assert g.name == "K13"
    assert is_isomorphic(g, star(3))
    assert g.head["e1:+"] == "x" and g.head["e1:-"] == "c"


@pytest.mark.parametrize("text", ["vertex", "edge a b", "graph", "node x",
                                  "vertex a\nedge e a b"])
def test_parse_errors(text):
    with pytest.raises(GraphError):
        parse_graph_text(text)


@given(connected_graphs(max_edges=5))
def test_text_round_trip(g):
    back = parse_graph_text(format_graph_text(g))
    assert canonical_form(back) == canonical_form(g)


def test_text_round_trip_keeps_arrow_names():
    g = parse_graph_text(K13)
    assert parse_graph_text(format_graph_text(g)) == g


def test_load_graph_from_file(tmp_path):
    p = tmp_path / "claw.txt"
    p.write_text(K13.replace("graph K13   # a claw\n", ""))
    g = load_graph(str(p))
    assert g.name == "claw" and is_isomorphic(g, star(3))
    assert is_isomorphic(load_graph("K1,3"), g)


@given(connected_graphs(max_edges=5))
def test_graph_json_round_trip(g):
    g = relabel(g, random.Random(0))
    assert graph_from_json(graph_to_json(g)) == g


def test_directed_import_uses_line_order():
    d = parse_graph_text("vertex u\nvertex v\nedge b v u\nedge a u u\n", directed=True)
    assert isinstance(d, OrderedDirectedGraph)
    assert d.arrows == ("b", "a")
    assert d.head["b"] == "v" and d.tail["b"] == "u"
    assert graph_from_json(graph_to_json(d)) == d


def test_homology_group_json():
    for g in (HomologyGroup(0), HomologyGroup(3, (2, 4))):
        assert HomologyGroup.from_json(g.to_json()) == g


def test_report_row_json():
    row = ReportRow("K5", 1, 2, 6, [2], seconds=0.5, oracle="agree")
    assert ReportRow(**row.to_json()) == row
